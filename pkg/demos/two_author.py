"""Rank the smallest interesting corpus: Y cites X once.

Run: python demos/two_author.py
"""

from c3index.corpus import Corpus, PaperRecord
from c3index.graph import build_graph
from c3index.metrics import compute_baselines
from c3index.solver import SolverConfig, solve

corpus = Corpus.from_records([
    PaperRecord("P1", "an early result", 1998, ("X",)),
    PaperRecord("P2", "a follow-up", 1999, ("Y",), ("P1",)),
])
graph, build = build_graph(corpus)
scores, report = solve(graph, SolverConfig(theta=0.5))
base = compute_baselines(graph)

print(f"converged after {report.iterations_run} iterations")
for p, q in zip(graph.paper_ids, scores.pqi):
    print(f"  {p}: pqi={q:.4f}")
for j, name in enumerate(graph.author_names):
    print(f"  {name}: h={base.h_index[j]} aci={scores.aci[j]:.4f} aai={scores.aai[j]:.4f} "
          f"pci={scores.pci[j]:.4f} c3={scores.c3[j]:.4f}")
