"""CSV output with a provenance comment line and fixed number formatting."""

from __future__ import annotations

import csv
import io
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .metrics import AuthorBaselines
from .solver import ConvergenceReport, ScoreSet

__all__ = [
    "fmt",
    "header_line",
    "write_csv",
    "scores_csv",
    "papers_csv",
    "baselines_csv",
    "read_csv",
    "author_order",
    "run_meta",
]


def fmt(x) -> str:
    """12 significant digits; integers stay integers."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        s = f"{float(x):.12g}"
        return "0" if s == "-0" else s
    return str(x)


def header_line(meta: Mapping[str, object]) -> str:
    return "# " + " ".join(f"{k}={fmt(v)}" for k, v in meta.items())


def write_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence],
    meta: Mapping[str, object] | None = None,
    stream: IO[str] | None = None,
) -> str:
    """Render rows as CSV text (and write it to ``stream`` if given)."""
    buf = io.StringIO()
    if meta:
        buf.write(header_line(meta) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_csv(text: str) -> tuple[str | None, list[dict[str, str]]]:
    """Inverse of :func:`write_csv`: returns the comment line and the rows."""
    lines = text.splitlines()
    comment = None
    if lines and lines[0].startswith("#"):
        comment, lines = lines[0], lines[1:]
    return comment, list(csv.DictReader(lines))


def author_order(scores: ScoreSet) -> np.ndarray:
    """Descending C3, ties by ascending author name."""
    names = np.asarray(scores.authors, dtype=object)
    if not len(names):
        return np.zeros(0, dtype=int)
    name_rank = np.argsort(names, kind="stable")
    pos = np.empty_like(name_rank)
    pos[name_rank] = np.arange(len(names))
    return np.lexsort((pos, -scores.c3))


def scores_csv(
    scores: ScoreSet,
    baselines: AuthorBaselines | None = None,
    meta: Mapping[str, object] | None = None,
    stream: IO[str] | None = None,
) -> str:
    cols = ["author", "aci", "aai", "pci", "c3"]
    if baselines is not None:
        cols += ["h_index", "total_citations"]
    rows = []
    for j in author_order(scores):
        row = [scores.authors[j], scores.aci[j], scores.aai[j], scores.pci[j], scores.c3[j]]
        if baselines is not None:
            row += [baselines.h_index[j], baselines.total_citations[j]]
        rows.append(row)
    return write_csv(cols, rows, meta, stream)


def papers_csv(
    scores: ScoreSet,
    baselines: AuthorBaselines | None = None,
    meta: Mapping[str, object] | None = None,
    stream: IO[str] | None = None,
) -> str:
    cols = ["paper", "pqi"] + (["citations"] if baselines is not None else [])
    ids = np.asarray(scores.papers, dtype=object)
    order = np.lexsort((np.arange(len(ids)), -scores.pqi)) if len(ids) else []
    rows = []
    for i in order:
        row = [ids[i], scores.pqi[i]]
        if baselines is not None:
            row.append(baselines.paper_citations[i])
        rows.append(row)
    return write_csv(cols, rows, meta, stream)


def baselines_csv(
    baselines: AuthorBaselines,
    meta: Mapping[str, object] | None = None,
    stream: IO[str] | None = None,
) -> str:
    rows = [
        (a, baselines.h_index[j], baselines.total_citations[j])
        for j, a in enumerate(baselines.authors)
    ]
    return write_csv(["author", "h_index", "total_citations"], rows, meta, stream)


def run_meta(
    corpus_digest: str,
    year: int | None,
    cfg,
    weighted: bool,
    self_citations: bool,
    report: ConvergenceReport | None = None,
) -> dict:
    meta = {
        "corpus": corpus_digest,
        "year": "all" if year is None else year,
        "theta": cfg.theta,
        "alpha": cfg.alpha,
        "epsilon": cfg.epsilon,
        "max_iters": cfg.max_iters,
        "weighted": str(weighted).lower(),
        "self_citations": str(self_citations).lower(),
        "aai_cycle": cfg.aai_cycle_handling,
    }
    if report is not None:
        meta["iterations"] = report.iterations_run
        meta["converged"] = str(report.converged).lower()
    return meta
