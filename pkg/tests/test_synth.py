import io

import numpy as np
import pytest
from scipy import stats

from c3index.corpus import parse_jsonl, write_jsonl
from c3index.graph import build_graph
from c3index.metrics import paper_citation_counts
from c3index.synth import SynthParams, _Urn, generate


def test_single_paper():
    corpus = generate(SynthParams(n_papers=1, n_authors=5, refs_per_paper_mean=10, seed=1))
    (p,) = corpus.papers
    assert p.ref_ids == ()
    assert len(p.author_names) >= 1


def test_deterministic_for_seed():
    p = SynthParams(500, 100, seed=42)
    assert write_jsonl(generate(p)) == write_jsonl(generate(p))
    other = SynthParams(500, 100, seed=43)
    assert write_jsonl(generate(p)) != write_jsonl(generate(other))


@pytest.mark.parametrize("seed", range(3))
def test_valid_and_temporally_sound(seed):
    corpus = generate(SynthParams(800, 150, refs_per_paper_mean=12, authors_per_paper_mean=3, seed=seed))
    corpus.validate()
    again, report = parse_jsonl(io.BytesIO(write_jsonl(corpus)))
    assert report.records_rejected == 0 and report.dangling_refs_dropped == 0
    assert again == corpus
    year = {p.id: p.year for p in corpus.papers}
    for p in corpus.papers:
        for r in p.ref_ids:
            assert r < p.id
            assert year[r] <= year[p.id]


def test_years_cover_range_in_arrival_order():
    corpus = generate(SynthParams(100, 20, year_start=2000, year_end=2009, seed=0))
    years = [p.year for p in corpus.papers]
    assert years == sorted(years)
    assert years[0] == 2000 and years[-1] == 2009
    assert np.all(np.bincount(np.array(years) - 2000) == 10)


def test_refs_truncated_when_few_earlier_papers():
    corpus = generate(SynthParams(5, 3, refs_per_paper_mean=50, seed=0))
    for i, p in enumerate(corpus.papers):
        assert len(p.ref_ids) <= i


def test_uniform_targets_without_bias():
    urn = _Urn(0.0)
    urn.hit([0] * 1000)  # ignored when bias is 0
    rng = np.random.Generator(np.random.PCG64(7))
    draws = [urn.draw(rng, 20, 1)[0] for _ in range(10_000)]
    counts = np.bincount(draws, minlength=20)
    assert stats.chisquare(counts).pvalue > 1e-3


def test_biased_urn_follows_weights():
    urn = _Urn(2.0)
    urn.hit([0] * 4 + [1])  # weights 1 + 2 * hits: 9, 3, 1, 1
    rng = np.random.Generator(np.random.PCG64(3))
    counts = np.bincount([urn.draw(rng, 4, 1)[0] for _ in range(20_000)], minlength=4)
    expected = np.array([9, 3, 1, 1]) / 14 * 20_000
    assert stats.chisquare(counts, expected).pvalue > 1e-3


def test_preferential_attachment_skews_citations():
    corpus = generate(SynthParams(5000, 1500, attachment_bias=5.0, seed=11))
    g, _ = build_graph(corpus)
    c = paper_citation_counts(g)
    assert stats.skew(c) > 0
    top = np.sort(c)[::-1][: len(c) // 100]
    assert top.sum() / c.sum() > 0.05


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_papers=0), dict(n_authors=0), dict(year_start=2001, year_end=2000),
     dict(refs_per_paper_mean=-1), dict(authors_per_paper_mean=0.5), dict(attachment_bias=-1),
     dict(seed=-1)],
)
def test_invalid_params(kwargs):
    base = dict(n_papers=10, n_authors=5)
    with pytest.raises(ValueError):
        SynthParams(**{**base, **kwargs})
