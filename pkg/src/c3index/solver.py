"""C3-index fixed-point computation.

Five coupled recurrences are iterated in lock step. With ``theta`` the
damping factor and ``alpha`` the credit exponent, one iteration maps the
previous scores to::

    pqi[i] = (1 - theta) + theta * sum_{k cites i} pqi'[k] / outdeg_paper(k)
    aci[j] = (1 - theta) + theta * sum_{k -> j} w(k, j) * aci'[k] / out_strength(k)
    aai[j] = sum_{k ~ j} w(k, j) * aai'[k] / coauthor_strength(k)
    pci[j] = c3'[j]**alpha * sum_{p in papers(j)} pqi'[p] / sum_{l in authors(p)} c3'[l]**alpha
    c3[j]  = (1 - theta) + theta * (aci[j] + aai[j] + pci[j])

where primed values come from the previous iteration and ``c3`` uses the
components of the current one. In unweighted mode every ``w`` is 1 and the
strengths become plain neighbour counts.

The co-authorship recurrence has no damping. On a bipartite component it
oscillates with period two; with ``aai_cycle_handling="midpoint"`` such an
oscillation is replaced by the mean of its two states, which is the fixed
point of the walk on that component.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .graph import MultiLayerGraph

__all__ = [
    "SolverConfig",
    "ScoreSet",
    "ConvergenceReport",
    "init_scores",
    "pqi_step",
    "aci_step",
    "aai_step",
    "pci_step",
    "c3_step",
    "solve",
    "dense_oracle",
    "ORACLE_MAX_NODES",
]

CYCLE_MODES = ("midpoint", "none")
VECTORS = ("pqi", "aci", "aai", "pci", "c3")
ORACLE_MAX_NODES = 200


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters.

    ``theta=0.5`` and ``alpha=0`` are the published settings; ``epsilon``,
    ``max_iters`` and the cycle handling are engineering choices.
    ``weighted=None`` defers to the graph's build options.
    """

    theta: float = 0.5
    alpha: float = 0.0
    epsilon: float = 1e-9
    max_iters: int = 1000
    weighted: bool | None = None
    aai_cycle_handling: str = "midpoint"

    def __post_init__(self):
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")
        if self.aai_cycle_handling not in CYCLE_MODES:
            raise ValueError(f"aai_cycle_handling must be one of {CYCLE_MODES}")

    def is_weighted(self, graph: MultiLayerGraph) -> bool:
        return graph.weighted if self.weighted is None else self.weighted


@dataclass(frozen=True, eq=False)
class ScoreSet:
    pqi: np.ndarray
    aci: np.ndarray
    aai: np.ndarray
    pci: np.ndarray
    c3: np.ndarray
    iteration: int = 0
    authors: tuple[str, ...] = ()
    papers: tuple[str, ...] = ()

    def vectors(self) -> tuple[np.ndarray, ...]:
        return self.pqi, self.aci, self.aai, self.pci, self.c3


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    iterations_run: int
    final_delta: float
    converged: bool
    aai_cycle_detected: bool
    cycle_substitutions: int = 0
    # per-iteration max-norm change of (pqi, aci, aai, pci, c3)
    deltas: np.ndarray = field(default_factory=lambda: np.zeros((0, 5)))


def init_scores(graph: MultiLayerGraph) -> ScoreSet:
    """All five vectors set to one, iteration 0."""
    n_p, n_a = graph.n_papers, graph.n_authors
    return ScoreSet(
        pqi=np.ones(n_p),
        aci=np.ones(n_a),
        aai=np.ones(n_a),
        pci=np.ones(n_a),
        c3=np.ones(n_a),
        iteration=0,
        authors=graph.author_names,
        papers=graph.paper_ids,
    )


class _Operator:
    """CSR matrix whose product can be split into fixed row blocks.

    Each row is reduced by scipy in ascending column order, so the result is
    bitwise identical for any number of blocks.
    """

    def __init__(self, m: sp.csr_matrix):
        self.m = m
        self.blocks: list[tuple[int, int, sp.csr_matrix]] = []
        self._n_blocks = 1

    def split(self, n_blocks: int) -> None:
        if n_blocks == self._n_blocks:
            return
        self._n_blocks = n_blocks
        self.blocks = []
        if n_blocks > 1:
            bounds = np.linspace(0, self.m.shape[0], n_blocks + 1).astype(int)
            for lo, hi in zip(bounds[:-1], bounds[1:]):
                if hi > lo:
                    self.blocks.append((lo, hi, self.m[lo:hi]))

    def __call__(self, x: np.ndarray, pool: ThreadPoolExecutor | None = None) -> np.ndarray:
        if pool is None or len(self.blocks) < 2:
            return self.m @ x
        out = np.empty(self.m.shape[0])

        def run(block):
            lo, hi, m = block
            out[lo:hi] = m @ x

        list(pool.map(run, self.blocks))
        return out


def _ops(graph: MultiLayerGraph, weighted: bool) -> dict:
    key = ("solver_ops", weighted)
    ops = graph._cache.get(key)
    if ops is not None:
        return ops

    def unit(m):
        m = m.astype(np.float64)
        if not weighted:
            m.data[:] = 1.0
        return m

    citing = graph._t("paper_citation").astype(np.float64)  # row i: papers citing i
    author_in = unit(graph._t("author_citation"))  # row j: authors citing j
    coauthor = unit(graph.coauthorship)
    out_paper = graph.out_degree_paper().astype(np.float64)
    out_author = graph.out_strength_author(weighted=weighted).astype(np.float64)
    co_strength = graph.strength_coauthor(weighted=weighted).astype(np.float64)
    ops = {
        "citing": _Operator(citing),
        "author_in": _Operator(author_in),
        "coauthor": _Operator(coauthor),
        "paper_authors": _Operator(graph.authorship.astype(np.float64)),
        "author_papers": _Operator(graph._t("authorship").astype(np.float64)),
        "out_paper": out_paper,
        "out_author": out_author,
        "co_strength": co_strength,
    }
    graph._cache[key] = ops
    return ops


def _share(x: np.ndarray, deg: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    np.divide(x, deg, out=out, where=deg > 0)
    return out


def pqi_step(graph, prev: ScoreSet, cfg: SolverConfig, pool=None) -> np.ndarray:
    ops = _ops(graph, cfg.is_weighted(graph))
    flow = ops["citing"](_share(prev.pqi, ops["out_paper"]), pool)
    return (1.0 - cfg.theta) + cfg.theta * flow


def aci_step(graph, prev: ScoreSet, cfg: SolverConfig, pool=None) -> np.ndarray:
    ops = _ops(graph, cfg.is_weighted(graph))
    flow = ops["author_in"](_share(prev.aci, ops["out_author"]), pool)
    return (1.0 - cfg.theta) + cfg.theta * flow


def aai_step(graph, prev: ScoreSet, cfg: SolverConfig, pool=None) -> np.ndarray:
    ops = _ops(graph, cfg.is_weighted(graph))
    return ops["coauthor"](_share(prev.aai, ops["co_strength"]), pool)


def pci_step(graph, prev: ScoreSet, cfg: SolverConfig, pool=None) -> np.ndarray:
    """Distribute each paper's previous PQI over its authors.

    ``0 ** 0`` is taken as 1, so ``alpha=0`` is an equal split.
    """
    ops = _ops(graph, cfg.is_weighted(graph))
    weight = np.power(prev.c3, cfg.alpha)
    denom = ops["paper_authors"](weight, pool)
    if np.any(denom <= 0.0):
        raise FloatingPointError("paper with zero total author credit weight")
    return weight * ops["author_papers"](prev.pqi / denom, pool)


def c3_step(aci: np.ndarray, aai: np.ndarray, pci: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    return (1.0 - cfg.theta) + cfg.theta * (aci + aai + pci)


def _maxabs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def solve(
    graph: MultiLayerGraph,
    cfg: SolverConfig | None = None,
    threads: int = 1,
    callback: Callable[[ScoreSet], None] | None = None,
) -> tuple[ScoreSet, ConvergenceReport]:
    """Iterate from all-ones until every vector moves less than ``epsilon``.

    Parameters
    ----------
    graph : MultiLayerGraph
    cfg : SolverConfig, optional
    threads : int
        Row blocks evaluated concurrently inside each sparse product.
        Results do not depend on this value.
    callback : callable, optional
        Called with the :class:`ScoreSet` of every completed iteration.

    Returns
    -------
    scores, report
        ``report.converged`` is False when ``max_iters`` was exhausted; the
        last iterate is still returned.
    """
    cfg = cfg or SolverConfig()
    if threads < 1:
        raise ValueError("threads must be >= 1")
    ops = _ops(graph, cfg.is_weighted(graph))
    for name in ("citing", "author_in", "coauthor", "paper_authors", "author_papers"):
        ops[name].split(threads)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None

    prev = init_scores(graph)
    aai_before = None
    deltas = []
    detected = False
    substitutions = 0
    converged = False
    delta = float("inf")
    try:
        for t in range(1, cfg.max_iters + 1):
            pqi = pqi_step(graph, prev, cfg, pool)
            aci = aci_step(graph, prev, cfg, pool)
            aai = aai_step(graph, prev, cfg, pool)
            pci = pci_step(graph, prev, cfg, pool)

            if aai_before is not None:
                back = _maxabs(aai, aai_before)
                fwd = _maxabs(aai, prev.aai)
                if back < cfg.epsilon <= fwd:
                    detected = True
                    if cfg.aai_cycle_handling == "midpoint":
                        aai = 0.5 * (aai + prev.aai)
                        substitutions += 1

            c3 = c3_step(aci, aai, pci, cfg)
            cur = replace(prev, pqi=pqi, aci=aci, aai=aai, pci=pci, c3=c3, iteration=t)
            row = [_maxabs(a, b) for a, b in zip(cur.vectors(), prev.vectors())]
            deltas.append(row)
            delta = max(row)
            aai_before = prev.aai
            prev = cur
            if callback is not None:
                callback(cur)
            if delta < cfg.epsilon:
                converged = True
                break
    finally:
        if pool is not None:
            pool.shutdown()

    report = ConvergenceReport(
        iterations_run=prev.iteration,
        final_delta=delta,
        converged=converged,
        aai_cycle_detected=detected,
        cycle_substitutions=substitutions,
        deltas=np.asarray(deltas, dtype=float).reshape(-1, 5),
    )
    return prev, report


def dense_oracle(graph: MultiLayerGraph, cfg: SolverConfig | None = None) -> ScoreSet:
    """Reference implementation with dense matrices and explicit loops.

    Rebuilds the author layers from the authorship and paper citation lists
    rather than reusing the sparse ones. Test use only; refuses graphs with
    more than :data:`ORACLE_MAX_NODES` nodes.
    """
    cfg = cfg or SolverConfig()
    n_p, n_a = graph.n_papers, graph.n_authors
    if n_p + n_a > ORACLE_MAX_NODES:
        raise ValueError(f"graph too large for dense oracle ({n_p + n_a} nodes)")
    weighted = cfg.is_weighted(graph)
    self_cites = graph.options.include_self_citations
    theta, alpha, eps = cfg.theta, cfg.alpha, cfg.epsilon

    authors = [[int(a) for a in graph.authors_of(p)] for p in range(n_p)]
    refs = [[int(b) for b in graph.references(p)] for p in range(n_p)]

    cites = np.zeros((n_p, n_p))
    for a in range(n_p):
        for b in refs[a]:
            cites[a, b] = 1.0
    co = np.zeros((n_a, n_a))
    for p in range(n_p):
        for u in authors[p]:
            for v in authors[p]:
                if u != v:
                    co[u, v] += 1.0
    ac = np.zeros((n_a, n_a))
    for a in range(n_p):
        for b in refs[a]:
            for k in authors[a]:
                for j in authors[b]:
                    if k != j or self_cites:
                        ac[k, j] += 1.0
    if not weighted:
        co = (co > 0).astype(float)
        ac = (ac > 0).astype(float)

    def transition(adj):
        # column k carries adj[k, :] / rowsum(k)
        out = np.zeros_like(adj)
        s = adj.sum(axis=1)
        for k in range(adj.shape[0]):
            if s[k] > 0:
                out[:, k] = adj[k, :] / s[k]
        return out

    t_paper, t_author, t_co = transition(cites), transition(ac), transition(co)

    pqi, aci, aai, pci, c3 = (np.ones(n) for n in (n_p, n_a, n_a, n_a, n_a))
    older_aai = None
    t = 0
    for t in range(1, cfg.max_iters + 1):
        new_pqi = (1 - theta) + theta * (t_paper @ pqi)
        new_aci = (1 - theta) + theta * (t_author @ aci)
        new_aai = t_co @ aai
        new_pci = np.zeros(n_a)
        for j in range(n_a):
            total = 0.0
            for p in range(n_p):
                if j in authors[p]:
                    total += pqi[p] / sum(c3[l] ** alpha for l in authors[p])
            new_pci[j] = c3[j] ** alpha * total
        if older_aai is not None and n_a:
            if np.max(np.abs(new_aai - older_aai)) < eps <= np.max(np.abs(new_aai - aai)):
                if cfg.aai_cycle_handling == "midpoint":
                    new_aai = (new_aai + aai) / 2
        new_c3 = (1 - theta) + theta * (new_aci + new_aai + new_pci)

        delta = 0.0
        for new, old in ((new_pqi, pqi), (new_aci, aci), (new_aai, aai), (new_pci, pci), (new_c3, c3)):
            if new.size:
                delta = max(delta, float(np.max(np.abs(new - old))))
        older_aai = aai
        pqi, aci, aai, pci, c3 = new_pqi, new_aci, new_aai, new_pci, new_c3
        if delta < eps:
            break
    return ScoreSet(pqi, aci, aai, pci, c3, t, graph.author_names, graph.paper_ids)
