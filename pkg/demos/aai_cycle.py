"""The coauthor walk on a path A-B-C oscillates with period two.

Run: python demos/aai_cycle.py
"""

from c3index.corpus import Corpus, PaperRecord
from c3index.graph import build_graph
from c3index.solver import SolverConfig, solve

corpus = Corpus.from_records([
    PaperRecord("P1", "first", 2000, ("A", "B")),
    PaperRecord("P2", "second", 2000, ("B", "C")),
])
graph, _ = build_graph(corpus)

seen = []
_, literal = solve(graph, SolverConfig(aai_cycle_handling="none", max_iters=6), callback=seen.append)
print("literal iteration, aai over A, B, C:")
for s in seen:
    print(f"  t={s.iteration}: {s.aai.round(3).tolist()}")
print(f"converged={literal.converged}, cycle detected={literal.aai_cycle_detected}")

scores, mid = solve(graph, SolverConfig(aai_cycle_handling="midpoint"))
print(f"midpoint: aai={scores.aai.tolist()} after {mid.iterations_run} iterations")
