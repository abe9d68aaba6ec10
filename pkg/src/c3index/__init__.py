"""C3-index: author ranking over a three-layer citation/coauthorship network."""

from .corpus import (
    Corpus,
    CorpusError,
    PaperRecord,
    ParseReport,
    Snapshot,
    parse_aminer,
    parse_jsonl,
    snapshot,
    write_jsonl,
)
from .graph import BuildReport, GraphBuildOptions, MultiLayerGraph, build_graph
from .metrics import AuthorBaselines, compute_baselines
from .solver import ConvergenceReport, ScoreSet, SolverConfig, dense_oracle, solve
from .synth import SynthParams, generate

__version__ = "0.1.0"
