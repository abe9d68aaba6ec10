"""Experiments built on top of solved snapshots.

h-index histograms and cohort drift, tie resolution of C3 within h-index
bins, Pearson correlation across years, scatter export, per-author
trajectories and component tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .corpus import Corpus, snapshot
from .export import fmt, write_csv
from .graph import GraphBuildOptions, build_graph
from .metrics import AuthorBaselines, compute_baselines
from .solver import ScoreSet, SolverConfig, solve

__all__ = [
    "UnknownAuthorError",
    "HDistribution",
    "CohortDrift",
    "TieBin",
    "TieStats",
    "ConsistencyResult",
    "h_distribution",
    "cohort_drift",
    "tie_stats",
    "pearson",
    "rank_snapshot",
    "temporal_consistency",
    "scatter_rows",
    "export_scatter",
    "trajectories",
    "component_table",
]


class UnknownAuthorError(KeyError):
    def __init__(self, name: str, candidates: Sequence[str] = ()):
        self.name = name
        self.candidates = list(candidates)
        msg = f"unknown author {name!r}"
        if self.candidates:
            msg += "; did you mean: " + ", ".join(self.candidates)
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


def _resolve(names: Sequence[str], lookup: Mapping[str, int], pool: Sequence[str]) -> list[int]:
    out = []
    for n in names:
        if n not in lookup:
            stem = n.rstrip(".").split(" ")[0] if n else n
            cands = [a for a in pool if a.startswith(n)] or [a for a in pool if stem and a.startswith(stem)]
            raise UnknownAuthorError(n, sorted(cands)[:10])
        out.append(lookup[n])
    return out


# -- h-index distributions -----------------------------------------------


@dataclass(frozen=True, eq=False)
class HDistribution:
    h_values: np.ndarray
    counts: np.ndarray
    cumulative_share: np.ndarray

    def as_dict(self) -> dict[int, int]:
        return {int(h): int(c) for h, c in zip(self.h_values, self.counts)}

    def share_at_most(self, h: int) -> float:
        mask = self.h_values <= h
        return float(self.cumulative_share[mask][-1]) if mask.any() else 0.0


def h_distribution(baselines: AuthorBaselines) -> HDistribution:
    """Author counts per h value (only occupied values) and cumulative share."""
    h = np.asarray(baselines.h_index)
    values, counts = np.unique(h, return_counts=True)
    total = counts.sum()
    cum = np.cumsum(counts) / total if total else np.zeros(0)
    return HDistribution(values, counts, cum)


@dataclass(frozen=True, eq=False)
class CohortDrift:
    bin_edges: tuple[int, ...]
    percent_before: np.ndarray
    percent_after: np.ndarray
    cohort_size: int
    mean_h_before: float
    mean_h_after: float

    def labels(self) -> list[str]:
        labs = []
        for i, lo in enumerate(self.bin_edges):
            if i + 1 < len(self.bin_edges):
                hi = self.bin_edges[i + 1] - 1
                labs.append(str(lo) if hi == lo else f"{lo}-{hi}")
            else:
                labs.append(f"{lo}+")
        return labs


def _bin_of(h: np.ndarray, edges: Sequence[int]) -> np.ndarray:
    return np.searchsorted(np.asarray(edges), h, side="right") - 1


def cohort_drift(
    before: AuthorBaselines,
    after: AuthorBaselines,
    bins: Sequence[int] = (0, 1, 2, 3, 4, 5, 10, 20),
) -> CohortDrift:
    """h-index bin shares of the authors present at the earlier snapshot, then and later.

    ``bins`` are ascending lower edges; the last bin is open-ended. Every
    cohort member must also appear in ``after``.
    """
    edges = tuple(int(b) for b in bins)
    if not edges or list(edges) != sorted(set(edges)) or edges[0] > 0:
        raise ValueError("bins must be strictly ascending lower edges starting at or below 0")
    if not len(before.authors):
        raise ValueError("empty cohort")
    later = after.lookup()
    missing = [a for a in before.authors if a not in later]
    if missing:
        raise ValueError(f"{len(missing)} cohort authors absent from the later snapshot")
    h0 = np.asarray(before.h_index)
    h1 = np.asarray(after.h_index)[[later[a] for a in before.authors]]
    n = len(h0)
    k = len(edges)
    p0 = np.bincount(_bin_of(h0, edges), minlength=k) * 100.0 / n
    p1 = np.bincount(_bin_of(h1, edges), minlength=k) * 100.0 / n
    return CohortDrift(edges, p0, p1, n, float(h0.mean()), float(h1.mean()))


# -- tie resolution ------------------------------------------------------


@dataclass(frozen=True)
class TieBin:
    h: int
    author_count: int
    distinct_c3_values: int
    tie_fraction: float
    c3_min: float
    c3_max: float

    @property
    def c3_spread(self) -> float:
        return self.c3_max - self.c3_min


@dataclass(frozen=True)
class TieStats:
    bins: tuple[TieBin, ...]

    def __iter__(self):
        return iter(self.bins)

    def by_h(self) -> dict[int, TieBin]:
        return {b.h: b for b in self.bins}


def tie_stats(scores: ScoreSet, baselines: AuthorBaselines) -> TieStats:
    """Per h value: how many distinct C3 values (at export precision) occur."""
    h = np.asarray(baselines.h_index)
    c3 = np.asarray(scores.c3)
    if h.shape != c3.shape:
        raise ValueError("scores and baselines come from different snapshots")
    out = []
    for value in np.unique(h):
        sel = c3[h == value]
        distinct = len({fmt(x) for x in sel})
        out.append(
            TieBin(
                h=int(value),
                author_count=int(sel.size),
                distinct_c3_values=distinct,
                tie_fraction=1.0 - distinct / sel.size,
                c3_min=float(sel.min()),
                c3_max=float(sel.max()),
            )
        )
    return TieStats(tuple(out))


# -- correlation ---------------------------------------------------------


def pearson(x, y) -> float:
    """Pearson product-moment correlation.

    Raises ``ValueError`` for mismatched or too-short inputs and for a
    constant vector, where the coefficient is undefined.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    if x.size < 2:
        raise ValueError("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance: correlation undefined")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


@dataclass(frozen=True)
class ConsistencyResult:
    base_year: int
    target_year: int
    h_bin: tuple[int, ...]
    pearson_r: float
    n_common_authors: int
    rank_based: bool = False


def rank_snapshot(
    corpus: Corpus,
    year: int,
    cfg: SolverConfig | None = None,
    options: GraphBuildOptions | None = None,
):
    """Snapshot, build, solve and compute baselines for one year."""
    graph, _ = build_graph(snapshot(corpus, year), options)
    scores, report = solve(graph, cfg)
    return scores, compute_baselines(graph), report


def temporal_consistency(
    corpus: Corpus,
    base_year: int,
    target_year: int,
    h_bin: int | Iterable[int] = (1,),
    cfg: SolverConfig | None = None,
    options: GraphBuildOptions | None = None,
    rank: bool = False,
) -> ConsistencyResult:
    """Correlate C3 of a base-year h-index cohort with its C3 at a later year.

    With ``rank=True`` the scores are replaced by their (average) ranks
    before correlating.
    """
    if base_year > target_year:
        raise ValueError("base_year must not exceed target_year")
    hb = (int(h_bin),) if isinstance(h_bin, (int, np.integer)) else tuple(sorted(int(h) for h in h_bin))
    s0, b0, _ = rank_snapshot(corpus, base_year, cfg, options)
    s1, _, _ = rank_snapshot(corpus, target_year, cfg, options)
    later = {a: i for i, a in enumerate(s1.authors)}
    pick = [
        j for j, a in enumerate(s0.authors)
        if int(b0.h_index[j]) in hb and a in later
    ]
    if len(pick) < 2:
        raise ValueError(f"only {len(pick)} authors in h bin {hb} present at both years")
    x = s0.c3[pick]
    y = s1.c3[[later[s0.authors[j]] for j in pick]]
    if rank:
        x, y = rankdata(x), rankdata(y)
    return ConsistencyResult(base_year, target_year, hb, pearson(x, y), len(pick), rank)


# -- scatter, trajectories, tables ---------------------------------------


def _minmax(v: np.ndarray) -> tuple[np.ndarray, bool]:
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return v, True
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v), True
    return (v - lo) / (hi - lo), False


def scatter_rows(scores: ScoreSet, baselines: AuthorBaselines):
    """Rows ``(author, h_norm, c3_norm, h_index, c3)`` and the degenerate flags."""
    h_norm, h_flat = _minmax(baselines.h_index)
    c_norm, c_flat = _minmax(scores.c3)
    rows = [
        (a, h_norm[j], c_norm[j], baselines.h_index[j], scores.c3[j])
        for j, a in enumerate(scores.authors)
    ]
    return rows, {"h_degenerate": h_flat, "c3_degenerate": c_flat}


def export_scatter(scores: ScoreSet, baselines: AuthorBaselines, meta: Mapping | None = None, stream=None) -> str:
    """Min-max normalized h-index and C3 per author, raw values alongside."""
    rows, flags = scatter_rows(scores, baselines)
    m = dict(meta or {})
    m.update({k: str(v).lower() for k, v in flags.items()})
    return write_csv(["author", "h_norm", "c3_norm", "h_index", "c3"], rows, m, stream)


def trajectories(
    corpus: Corpus,
    author_names: Sequence[str],
    years: Sequence[int],
    cfg: SolverConfig | None = None,
    options: GraphBuildOptions | None = None,
) -> dict[str, list[tuple[int, int, float]]]:
    """``(year, h, c3)`` series per author over ascending snapshot years."""
    years = list(years)
    if not years or years != sorted(years):
        raise ValueError("years must be a non-empty ascending list")
    series: dict[str, list[tuple[int, int, float]]] = {a: [] for a in author_names}
    for i, year in enumerate(years):
        scores, base, _ = rank_snapshot(corpus, year, cfg, options)
        lookup = base.lookup()
        idx = _resolve(author_names, lookup, scores.authors) if i == 0 else [lookup[a] for a in author_names]
        for a, j in zip(author_names, idx):
            series[a].append((year, int(base.h_index[j]), float(scores.c3[j])))
    return series


def component_table(
    scores: ScoreSet, baselines: AuthorBaselines, author_names: Sequence[str]
) -> list[tuple[str, int, float, float, float]]:
    """Rows ``(author, h, aci, pci, aai)`` in the requested order."""
    lookup = baselines.lookup()
    idx = _resolve(author_names, lookup, baselines.authors)
    return [
        (a, int(baselines.h_index[j]), float(scores.aci[j]), float(scores.pci[j]), float(scores.aai[j]))
        for a, j in zip(author_names, idx)
    ]
