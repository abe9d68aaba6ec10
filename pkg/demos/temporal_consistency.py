"""Correlate C3 of low-h authors in an early snapshot with their later h-index.

Run: python demos/temporal_consistency.py
"""

from c3index.analysis import temporal_consistency
from c3index.synth import SynthParams, generate

corpus = generate(SynthParams(n_papers=6000, n_authors=1800, year_start=1990, year_end=2008, seed=5))
for h in (1, 2):
    for rank in (False, True):
        res = temporal_consistency(corpus, 1998, 2008, h_bin=h, rank=rank)
        kind = "spearman" if rank else "pearson"
        print(f"h={h} at 1998 -> h at 2008: {kind} r={res.pearson_r:+.3f} over {res.n_common_authors} authors")
