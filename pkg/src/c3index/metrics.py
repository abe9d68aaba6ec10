"""Citation-count baselines: per-paper citations, per-author totals and h-index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import MultiLayerGraph

__all__ = [
    "AuthorBaselines",
    "paper_citation_counts",
    "author_h_index",
    "h_index",
    "compute_baselines",
]


@dataclass(frozen=True, eq=False)
class AuthorBaselines:
    h_index: np.ndarray
    total_citations: np.ndarray
    paper_citations: np.ndarray
    authors: tuple[str, ...] = ()
    papers: tuple[str, ...] = ()

    def lookup(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.authors)}


def paper_citation_counts(graph: MultiLayerGraph) -> np.ndarray:
    """In-degree of every paper in the citation layer (within the snapshot)."""
    return graph.in_degree_paper()


def h_index(citations) -> int:
    """Largest ``h`` with at least ``h`` entries ``>= h``."""
    c = np.sort(np.asarray(citations, dtype=np.int64))[::-1]
    return int(np.sum(c >= np.arange(1, c.size + 1)))


def author_h_index(graph: MultiLayerGraph, paper_citations: np.ndarray) -> np.ndarray:
    """h-index of every author; each coauthor receives full credit.

    Vectorised over the authorship links: sort each author's papers by
    descending citation count, then count positions ``r`` (1-based) with
    ``citations >= r``. Because the sequence is non-increasing and ``r``
    increasing, that count is exactly ``h``.
    """
    at = graph._t("authorship")  # author x paper
    author_of_link = np.repeat(np.arange(graph.n_authors), np.diff(at.indptr))
    cites = np.asarray(paper_citations, dtype=np.int64)[at.indices]
    order = np.lexsort((-cites, author_of_link))
    sorted_cites = cites[order]
    start = at.indptr[:-1]
    rank = np.arange(at.nnz) - np.repeat(start, np.diff(at.indptr)) + 1
    ok = sorted_cites >= rank
    return np.bincount(author_of_link[ok], minlength=graph.n_authors).astype(np.int64)


def compute_baselines(graph: MultiLayerGraph) -> AuthorBaselines:
    counts = paper_citation_counts(graph)
    total = np.asarray(graph._t("authorship") @ counts, dtype=np.int64).ravel()
    return AuthorBaselines(
        h_index=author_h_index(graph, counts),
        total_citations=total,
        paper_citations=counts,
        authors=graph.author_names,
        papers=graph.paper_ids,
    )
