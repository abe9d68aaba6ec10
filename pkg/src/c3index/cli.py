"""Command-line entry point: ``c3index {ingest,rank,analyze,synth}``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 solver did not
converge (outputs are still written).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import analysis
from .corpus import Corpus, CorpusError, corpus_hash, parse_aminer, parse_jsonl, snapshot, write_jsonl
from .export import baselines_csv, papers_csv, run_meta, scores_csv, write_csv
from .graph import GraphBuildOptions, build_graph
from .metrics import compute_baselines
from .solver import SolverConfig, solve
from .synth import SynthParams, generate

log = logging.getLogger("c3index")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2, 3
OUT_DIR_ENV = "C3INDEX_OUT_DIR"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str, fmt: str) -> Corpus:
    parse = parse_aminer if fmt == "aminer" else parse_jsonl
    try:
        with open(path, "rb") as fh:
            corpus, report = parse(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except CorpusError as exc:
        raise InputError(str(exc)) from exc
    if report.records_rejected:
        log.warning("%s: %d of %d records rejected", path, report.records_rejected, report.records_read)
    return corpus


def _out_dir(args) -> Path:
    d = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or ".")
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {d}: {exc}") from exc
    return d


def _solver_config(args) -> SolverConfig:
    try:
        return SolverConfig(
            theta=args.theta,
            alpha=args.alpha,
            epsilon=args.epsilon,
            max_iters=args.max_iters,
            aai_cycle_handling=args.aai_cycle,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _options(args) -> GraphBuildOptions:
    return GraphBuildOptions(weighted=not args.unweighted, include_self_citations=args.self_citations)


def _year(args, corpus: Corpus, attr: str = "year") -> int:
    y = getattr(args, attr)
    if y is None:
        years = corpus.years
        y = years[-1] if years else 1
    if y <= 0:
        raise UsageError("year must be positive")
    return y


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="")
    log.info("wrote %s", path)


# -- commands ------------------------------------------------------------


def cmd_ingest(args) -> int:
    parse = parse_aminer if args.format == "aminer" else parse_jsonl
    try:
        with open(args.input, "rb") as fh:
            corpus, report = parse(fh)
    except (OSError, CorpusError) as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    print(report.summary(), file=sys.stderr)
    data = write_jsonl(corpus)
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.out).write_bytes(data)
    return EXIT_OK


def _solve_snapshot(args, corpus: Corpus, year: int):
    snap = snapshot(corpus, year)
    if not len(snap.corpus):
        log.warning("snapshot %d is empty", year)
    opts = _options(args)
    cfg = _solver_config(args)
    graph, _ = build_graph(snap, opts)
    scores, report = solve(graph, cfg, threads=args.threads)
    meta = run_meta(corpus_hash(corpus), year, cfg, opts.weighted, opts.include_self_citations, report)
    return graph, scores, report, compute_baselines(graph), meta


def cmd_rank(args) -> int:
    corpus = _load(args.corpus, args.format)
    year = _year(args, corpus)
    out = _out_dir(args)
    _, scores, report, base, meta = _solve_snapshot(args, corpus, year)
    _write(out / "authors.csv", scores_csv(scores, base, meta))
    _write(out / "papers.csv", papers_csv(scores, base, meta))
    print(
        f"iterations={report.iterations_run} final_delta={report.final_delta:.3e} "
        f"converged={str(report.converged).lower()} aai_cycle={str(report.aai_cycle_detected).lower()}",
        file=sys.stderr,
    )
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_analyze(args) -> int:
    corpus = _load(args.corpus, args.format)
    out = _out_dir(args)
    kind = args.analysis
    cfg = _solver_config(args)
    opts = _options(args)
    status = EXIT_OK

    if kind in ("hist", "ties", "scatter", "table"):
        year = _year(args, corpus)
        _, scores, report, base, meta = _solve_snapshot(args, corpus, year)
        if not report.converged:
            status = EXIT_NOT_CONVERGED
        name = f"{kind}_{year}.csv"
        if kind == "hist":
            dist = analysis.h_distribution(base)
            rows = zip(dist.h_values, dist.counts, dist.cumulative_share)
            text = write_csv(["h_index", "authors", "cumulative_share"], rows, meta)
        elif kind == "ties":
            rows = [
                (b.h, b.author_count, b.distinct_c3_values, b.tie_fraction, b.c3_min, b.c3_max, b.c3_spread)
                for b in analysis.tie_stats(scores, base)
            ]
            cols = ["h_index", "author_count", "distinct_c3_values", "tie_fraction", "c3_min", "c3_max", "c3_spread"]
            text = write_csv(cols, rows, meta)
        elif kind == "scatter":
            text = analysis.export_scatter(scores, base, meta)
        else:
            names = _names(args)
            rows = analysis.component_table(scores, base, names)
            text = write_csv(["author", "h_index", "aci", "pci", "aai"], rows, meta)
        _write(out / name, text)
        return status

    if kind == "drift":
        base_year, target_year = _pair(args, corpus)
        g0, _ = build_graph(snapshot(corpus, base_year), opts)
        g1, _ = build_graph(snapshot(corpus, target_year), opts)
        drift = analysis.cohort_drift(compute_baselines(g0), compute_baselines(g1), args.bins)
        rows = zip(drift.labels(), drift.percent_before, drift.percent_after)
        meta = {"corpus": corpus_hash(corpus), "base": base_year, "target": target_year,
                "cohort": drift.cohort_size}
        text = write_csv(["h_bin", f"percent_{base_year}", f"percent_{target_year}"], rows, meta)
        _write(out / f"drift_{base_year}_{target_year}.csv", text)
        return status

    if kind == "consistency":
        base_year, target_year = _pair(args, corpus)
        rows = []
        for h in args.h_bin:
            res = analysis.temporal_consistency(
                corpus, base_year, target_year, h, cfg, opts, rank=args.rank
            )
            rows.append((base_year, target_year, h, res.pearson_r, res.n_common_authors))
        meta = run_meta(corpus_hash(corpus), base_year, cfg, opts.weighted, opts.include_self_citations)
        meta["target"] = target_year
        meta["correlate"] = "rank" if args.rank else "value"
        text = write_csv(["base_year", "target_year", "h_index", "pearson_r", "n_authors"], rows, meta)
        _write(out / f"consistency_{base_year}_{target_year}.csv", text)
        return status

    if kind == "trajectory":
        years = args.years or corpus.years
        if not years:
            raise InputError("corpus is empty")
        names = _names(args)
        series = analysis.trajectories(corpus, names, sorted(years), cfg, opts)
        rows = [(a, y, h, c) for a in names for (y, h, c) in series[a]]
        meta = run_meta(corpus_hash(corpus), None, cfg, opts.weighted, opts.include_self_citations)
        text = write_csv(["author", "year", "h_index", "c3"], rows, meta)
        ys = sorted(years)
        suffix = f"{ys[0]}" if len(ys) == 1 else f"{ys[0]}_{ys[-1]}"
        _write(out / f"trajectory_{suffix}.csv", text)
        return status

    raise UsageError(f"unknown analysis {kind!r}")


def _names(args) -> list[str]:
    if not args.authors:
        return []
    return [a.strip() for a in args.authors.split(";") if a.strip()]


def _pair(args, corpus: Corpus) -> tuple[int, int]:
    if args.base is None or args.target is None:
        raise UsageError("--base and --target are required")
    if args.base > args.target:
        raise UsageError("--base must not be later than --target")
    return args.base, args.target


def cmd_synth(args) -> int:
    try:
        params = SynthParams(
            n_papers=args.papers,
            n_authors=args.authors,
            year_start=args.year_start,
            year_end=args.year_end,
            refs_per_paper_mean=args.refs_mean,
            authors_per_paper_mean=args.team_mean,
            attachment_bias=args.bias,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = write_jsonl(generate(params))
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.out).write_bytes(data)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    g.add_argument("--theta", type=float, default=0.5, help="damping factor (published setting: 0.5)")
    g.add_argument("--alpha", type=float, default=0.0, help="credit exponent (published setting: 0)")
    g.add_argument("--epsilon", type=float, default=1e-9, help="max-norm stopping tolerance (engineering default)")
    g.add_argument("--max-iters", type=int, default=1000, help="iteration cap (engineering default)")
    g.add_argument("--aai-cycle", choices=("midpoint", "none"), default="midpoint",
                   help="co-authorship 2-cycle handling (engineering default: midpoint)")
    g.add_argument("--unweighted", action="store_true",
                   help="use neighbour counts instead of edge weights (default: weighted)")
    g.add_argument("--self-citations", action="store_true",
                   help="keep author self-citations (default: dropped)")
    g.add_argument("--threads", type=int, default=1, help="worker threads; output does not depend on it")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("corpus", help="corpus file")
    p.add_argument("--format", choices=("jsonl", "aminer"), default="jsonl")
    p.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or .)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="c3index", description="C3-index author ranking on citation corpora")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse a corpus into canonical JSON-lines")
    p.add_argument("input")
    p.add_argument("--format", choices=("aminer", "jsonl"), default="aminer")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("rank", help="solve one snapshot and write authors.csv / papers.csv")
    _add_input(p)
    p.add_argument("--year", type=int, help="snapshot bound (default: latest year)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("analyze", help="experiment exports")
    p.add_argument("analysis", choices=("hist", "drift", "ties", "scatter", "consistency", "trajectory", "table"))
    _add_input(p)
    p.add_argument("--year", type=int)
    p.add_argument("--base", type=int)
    p.add_argument("--target", type=int)
    p.add_argument("--years", type=int, nargs="+")
    p.add_argument("--h-bin", type=int, nargs="+", default=[1])
    p.add_argument("--bins", type=int, nargs="+", default=[0, 1, 2, 3, 4, 5, 10, 20])
    p.add_argument("--authors", help="';'-separated author names")
    p.add_argument("--rank", action="store_true", help="correlate rank positions instead of values")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--papers", type=int, required=True)
    p.add_argument("--authors", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--year-start", type=int, default=1990)
    p.add_argument("--year-end", type=int, default=2008)
    p.add_argument("--refs-mean", type=float, default=5.0)
    p.add_argument("--team-mean", type=float, default=2.5)
    p.add_argument("--bias", type=float, default=1.0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"c3index: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, CorpusError, analysis.UnknownAuthorError, ValueError) as exc:
        print(f"c3index: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
