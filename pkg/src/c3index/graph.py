"""Three-layer author/paper network.

Layers (all stored as canonical CSR with sorted indices):

* ``paper_citation``  -- ``C[a, b] = 1`` when paper ``a`` cites paper ``b``
* ``author_citation`` -- ``M[k, j]`` = number of (citing, cited) paper pairs
  with ``k`` an author of the citing and ``j`` an author of the cited paper
* ``coauthorship``    -- ``W[u, v]`` = number of papers written jointly by
  ``u`` and ``v``; symmetric, zero diagonal
* ``authorship``      -- bipartite incidence, ``B[p, a] = 1`` when ``a``
  wrote ``p``

Authors are indexed in ascending name order, papers in ascending id order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, CorpusError, Snapshot

__all__ = [
    "GraphBuildOptions",
    "BuildReport",
    "MultiLayerGraph",
    "build_graph",
    "dump_edges",
]


@dataclass(frozen=True)
class GraphBuildOptions:
    weighted: bool = True
    include_self_citations: bool = False


@dataclass(frozen=True)
class BuildReport:
    n_papers: int
    n_authors: int
    paper_citation_edges: int
    author_citation_edges: int
    author_citation_weight: int
    coauthorship_edges: int
    coauthorship_weight: int
    authorship_links: int
    self_citations_dropped: int


def _canonical(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


def _drop_diagonal(m: sp.csr_matrix) -> sp.csr_matrix:
    c = m.tocoo()
    keep = c.row != c.col
    return _canonical(
        sp.csr_matrix((c.data[keep], (c.row[keep], c.col[keep])), shape=m.shape)
    )


@dataclass(frozen=True, eq=False)
class MultiLayerGraph:
    """Immutable indexed network. Build with :func:`build_graph`."""

    paper_ids: tuple[str, ...]
    author_names: tuple[str, ...]
    paper_citation: sp.csr_matrix
    author_citation: sp.csr_matrix
    coauthorship: sp.csr_matrix
    authorship: sp.csr_matrix
    options: GraphBuildOptions = GraphBuildOptions()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_papers(self) -> int:
        return len(self.paper_ids)

    @property
    def n_authors(self) -> int:
        return len(self.author_names)

    @property
    def weighted(self) -> bool:
        return self.options.weighted

    def _t(self, name: str) -> sp.csr_matrix:
        # transposed layers, built lazily
        if name not in self._cache:
            self._cache[name] = _canonical(getattr(self, name).T)
        return self._cache[name]

    def author_index(self, name: str) -> int:
        idx = self._cache.get("author_index")
        if idx is None:
            idx = self._cache["author_index"] = {a: i for i, a in enumerate(self.author_names)}
        return idx[name]

    def paper_index(self, pid: str) -> int:
        idx = self._cache.get("paper_index")
        if idx is None:
            idx = self._cache["paper_index"] = {p: i for i, p in enumerate(self.paper_ids)}
        return idx[pid]

    def _check(self, i: int, n: int) -> int:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for {n} nodes")
        return int(i)

    @staticmethod
    def _row(m: sp.csr_matrix, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = m.indptr[i], m.indptr[i + 1]
        return m.indices[lo:hi], m.data[lo:hi]

    # -- neighbour lists ------------------------------------------------
    def references(self, p: int) -> np.ndarray:
        """Papers cited by paper ``p``."""
        return self._row(self.paper_citation, self._check(p, self.n_papers))[0]

    def cited_by(self, p: int) -> np.ndarray:
        """Papers citing paper ``p``."""
        return self._row(self._t("paper_citation"), self._check(p, self.n_papers))[0]

    def authors_of(self, p: int) -> np.ndarray:
        return self._row(self.authorship, self._check(p, self.n_papers))[0]

    def papers_of(self, a: int) -> np.ndarray:
        return self._row(self._t("authorship"), self._check(a, self.n_authors))[0]

    def coauthors(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """Coauthor indices of ``a`` and the joint-paper weights."""
        return self._row(self.coauthorship, self._check(a, self.n_authors))

    def cited_authors(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """Authors cited by ``a`` with citation multiplicities."""
        return self._row(self.author_citation, self._check(a, self.n_authors))

    def citing_authors(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """Authors citing ``a`` with citation multiplicities."""
        return self._row(self._t("author_citation"), self._check(a, self.n_authors))

    # -- degrees --------------------------------------------------------
    def _strengths(self, m: sp.csr_matrix, weighted: bool) -> np.ndarray:
        if weighted:
            return np.asarray(m.sum(axis=1)).ravel().astype(np.int64)
        return np.diff(m.indptr).astype(np.int64)

    def out_strength_author(self, k: int | None = None, weighted: bool | None = None):
        """Weighted (or distinct-neighbour) out-degree in the author citation layer.

        With ``k=None`` the whole vector is returned.
        """
        w = self.weighted if weighted is None else weighted
        v = self._strengths(self.author_citation, w)
        return v if k is None else int(v[self._check(k, self.n_authors)])

    def strength_coauthor(self, k: int | None = None, weighted: bool | None = None):
        w = self.weighted if weighted is None else weighted
        v = self._strengths(self.coauthorship, w)
        return v if k is None else int(v[self._check(k, self.n_authors)])

    def out_degree_paper(self, k: int | None = None):
        v = np.diff(self.paper_citation.indptr).astype(np.int64)
        return v if k is None else int(v[self._check(k, self.n_papers)])

    def in_degree_paper(self, k: int | None = None):
        v = np.diff(self._t("paper_citation").indptr).astype(np.int64)
        return v if k is None else int(v[self._check(k, self.n_papers)])

    def edges(self, layer: str) -> list[tuple[str, str, int]]:
        """``(src, dst, weight)`` triples of one layer, labelled by name/id."""
        m = getattr(self, layer).tocoo()
        if layer == "paper_citation":
            src_lab, dst_lab = self.paper_ids, self.paper_ids
        elif layer == "authorship":
            src_lab, dst_lab = self.paper_ids, self.author_names
        else:
            src_lab, dst_lab = self.author_names, self.author_names
        order = np.lexsort((m.col, m.row))
        return [
            (src_lab[m.row[i]], dst_lab[m.col[i]], int(m.data[i])) for i in order
        ]


def build_graph(
    snap: Snapshot | Corpus, options: GraphBuildOptions | None = None
) -> tuple[MultiLayerGraph, BuildReport]:
    """Index a snapshot (or corpus) and assemble all layers.

    Raises :class:`~c3index.corpus.CorpusError` if the input is not a valid,
    closed corpus.
    """
    options = options or GraphBuildOptions()
    corpus = snap.corpus if isinstance(snap, Snapshot) else snap
    corpus.validate()

    paper_ids = tuple(r.id for r in corpus.papers)
    author_names = tuple(sorted(corpus.author_universe))
    pidx = {p: i for i, p in enumerate(paper_ids)}
    aidx = {a: i for i, a in enumerate(author_names)}
    n_p, n_a = len(paper_ids), len(author_names)

    rows, cols = [], []
    b_rows, b_cols = [], []
    for i, r in enumerate(corpus.papers):
        for ref in r.ref_ids:
            rows.append(i)
            cols.append(pidx[ref])
        for a in r.author_names:
            b_rows.append(i)
            b_cols.append(aidx[a])

    C = _canonical(
        sp.csr_matrix(
            (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n_p, n_p)
        )
    )
    B = _canonical(
        sp.csr_matrix(
            (np.ones(len(b_rows), dtype=np.int64), (b_rows, b_cols)), shape=(n_p, n_a)
        )
    )
    if C.nnz and C.data.max() != 1:
        raise CorpusError("duplicate paper citation edges")

    Bt = _canonical(B.T)
    W = _drop_diagonal(Bt @ B)

    M = _canonical(Bt @ C @ B)
    self_cites = int(M.diagonal().sum())
    if not options.include_self_citations:
        M = _drop_diagonal(M)
        dropped = self_cites
    else:
        dropped = 0

    g = MultiLayerGraph(paper_ids, author_names, C, M, W, B, options)
    g._cache["authorship"] = Bt
    report = BuildReport(
        n_papers=n_p,
        n_authors=n_a,
        paper_citation_edges=int(C.nnz),
        author_citation_edges=int(M.nnz),
        author_citation_weight=int(M.sum()),
        coauthorship_edges=int(W.nnz // 2),
        coauthorship_weight=int(W.sum() // 2),
        authorship_links=int(B.nnz),
        self_citations_dropped=dropped,
    )
    return g, report


def dump_edges(graph: MultiLayerGraph, layer: str, stream: IO[str]) -> None:
    """Write one layer as CSV ``src,dst,weight``."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["src", "dst", "weight"])
    for row in graph.edges(layer):
        w.writerow(row)
