import numpy as np
import pytest

from c3index.corpus import Corpus, PaperRecord
from c3index.graph import build_graph


def make_corpus(papers):
    """``papers``: iterable of (id, year, authors, refs)."""
    return Corpus.from_records(
        PaperRecord(pid, f"title {pid}", year, tuple(authors), tuple(refs))
        for pid, year, authors, refs in papers
    )


def random_corpus(seed, max_papers=60, max_authors=30):
    """Small random corpus with arbitrary citation directions (cycles allowed)."""
    rng = np.random.default_rng(seed)
    n_p = int(rng.integers(2, max_papers + 1))
    n_a = int(rng.integers(2, max_authors + 1))
    density = rng.uniform(0.0, 0.15)
    papers = []
    for i in range(n_p):
        team = rng.choice(n_a, size=int(rng.integers(1, min(4, n_a) + 1)), replace=False)
        refs = [j for j in range(n_p) if j != i and rng.random() < density]
        papers.append((
            f"p{i:02d}",
            int(rng.integers(1990, 2000)),
            [f"a{a:02d}" for a in sorted(team)],
            [f"p{j:02d}" for j in refs],
        ))
    return make_corpus(papers)


@pytest.fixture
def two_author():
    """X wrote P1, Y wrote P2, P2 cites P1."""
    return make_corpus([("P1", 1998, ["X"], []), ("P2", 1999, ["Y"], ["P1"])])


@pytest.fixture
def two_author_graph(two_author):
    return build_graph(two_author)[0]


@pytest.fixture
def path_graph():
    """Coauthorship path A - B - C from two joint papers."""
    corpus = make_corpus([("P1", 2000, ["A", "B"], []), ("P2", 2000, ["B", "C"], [])])
    return build_graph(corpus)[0]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
