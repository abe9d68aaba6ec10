"""How well does C3 separate authors who share an h-index?

Run: python demos/tie_breaking.py
"""

from c3index.analysis import tie_stats
from c3index.graph import build_graph
from c3index.metrics import compute_baselines
from c3index.solver import solve
from c3index.synth import SynthParams, generate

graph, _ = build_graph(generate(SynthParams(n_papers=8000, n_authors=2500, seed=3)))
scores, _ = solve(graph)
stats = tie_stats(scores, compute_baselines(graph))

print(" h  authors  distinct  share")
for b in stats.bins:
    print(f"{b.h:2d} {b.author_count:8d} {b.distinct_c3_values:9d}  {b.distinct_c3_values / b.author_count:.3f}")
# Uncited authors keep many ties: their aci is fixed at 1 - theta and the
# remaining components depend only on team sizes and coauthor counts.
