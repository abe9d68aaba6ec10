from dataclasses import replace

import numpy as np
import pytest

from c3index.graph import GraphBuildOptions, build_graph
from c3index.solver import (
    ScoreSet,
    SolverConfig,
    aai_step,
    aci_step,
    c3_step,
    dense_oracle,
    init_scores,
    pci_step,
    pqi_step,
    solve,
)

from conftest import make_corpus, random_corpus

CFG = SolverConfig()


def with_values(graph, **vectors):
    return replace(init_scores(graph), **vectors)


def max_diff(a: ScoreSet, b: ScoreSet) -> float:
    return max(float(np.max(np.abs(x - y))) if x.size else 0.0 for x, y in zip(a.vectors(), b.vectors()))


# -- config ---------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [dict(theta=1.0), dict(theta=-0.1), dict(alpha=-1), dict(epsilon=0), dict(max_iters=0),
     dict(aai_cycle_handling="damp")],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


# -- init -----------------------------------------------------------------


def test_init_scores_all_ones():
    g, _ = build_graph(make_corpus([("P1", 2000, ["A", "B"], []), ("P2", 2000, ["C"], ["P1"])]))
    s = init_scores(g)
    assert list(s.pqi) == [1, 1]
    for v in (s.aci, s.aai, s.pci, s.c3):
        assert list(v) == [1, 1, 1]
    assert s.iteration == 0
    t = init_scores(g)
    assert all(np.array_equal(a, b) for a, b in zip(s.vectors(), t.vectors()))


def test_init_empty_graph():
    g, _ = build_graph(make_corpus([]))
    assert all(v.size == 0 for v in init_scores(g).vectors())


# -- single steps ---------------------------------------------------------


def test_pqi_uncited_paper(two_author_graph):
    g = two_author_graph
    pqi = pqi_step(g, init_scores(g), CFG)
    assert pqi[g.paper_index("P2")] == 0.5
    # one step from all-ones: 0.5 + 0.5 * 1/1
    assert pqi[g.paper_index("P1")] == 1.0


def test_pqi_three_cycle_fixed_point():
    corpus = make_corpus([("P1", 2000, ["A"], ["P2"]), ("P2", 2000, ["B"], ["P3"]), ("P3", 2000, ["C"], ["P1"])])
    g, _ = build_graph(corpus)
    scores, report = solve(g)
    assert report.converged
    np.testing.assert_array_equal(scores.pqi, [1.0, 1.0, 1.0])
    np.testing.assert_array_equal(dense_oracle(g).pqi, [1.0, 1.0, 1.0])


def test_aci_never_cited_author(two_author_graph):
    g = two_author_graph
    prev = init_scores(g)
    for _ in range(3):
        aci = aci_step(g, prev, CFG)
        assert aci[g.author_index("Y")] == 0.5
        prev = with_values(g, aci=aci)


def test_aci_weighted_share():
    # K cites J's paper three times (three papers) and L's paper once
    papers = [("j", 2000, ["J"], []), ("l", 2000, ["L"], [])]
    papers += [(f"k{i}", 2001, ["K"], ["j"]) for i in range(3)]
    papers += [("k3", 2001, ["K"], ["l"])]
    g, _ = build_graph(make_corpus(papers))
    k, j, l = (g.author_index(a) for a in "KJL")
    assert g.author_citation[k, j] == 3 and g.out_strength_author(k) == 4
    prev = with_values(g, aci=np.where(np.arange(g.n_authors) == k, 2.0, 0.0))
    aci = aci_step(g, prev, CFG)
    assert aci[j] == pytest.approx(0.5 + 0.5 * 2.0 * 3 / 4)
    assert aci[l] == pytest.approx(0.5 + 0.5 * 2.0 * 1 / 4)
    # unweighted: distinct cited authors, equal halves
    aci_u = aci_step(g, prev, SolverConfig(weighted=False))
    assert aci_u[j] == aci_u[l] == pytest.approx(0.5 + 0.5 * 2.0 / 2)


def test_aai_sole_author_and_pair():
    g, _ = build_graph(make_corpus([("P1", 2000, ["S"], []), ("P2", 2000, ["A", "B"], [])]))
    aai = aai_step(g, init_scores(g), CFG)
    assert aai[g.author_index("S")] == 0.0
    scores, _ = solve(g)
    assert scores.aai[g.author_index("A")] == scores.aai[g.author_index("B")] == 1.0


def test_aai_path_literal_two_cycle(path_graph):
    g = path_graph
    s = init_scores(g)
    seen = []
    for _ in range(4):
        s = with_values(g, aai=aai_step(g, s, CFG))
        seen.append(list(s.aai))
    assert seen == [[0.5, 2.0, 0.5], [1.0, 1.0, 1.0], [0.5, 2.0, 0.5], [1.0, 1.0, 1.0]]


def test_aai_path_midpoint_is_fixed_point(path_graph):
    g = path_graph
    scores, report = solve(g)
    assert report.converged and report.aai_cycle_detected
    np.testing.assert_allclose(scores.aai, [0.75, 1.5, 0.75], rtol=0, atol=1e-12)
    again = aai_step(g, scores, CFG)
    np.testing.assert_allclose(again, scores.aai, rtol=0, atol=1e-15)


def test_aai_path_literal_mode_does_not_converge(path_graph):
    scores, report = solve(path_graph, SolverConfig(aai_cycle_handling="none", max_iters=50))
    assert not report.converged
    assert report.aai_cycle_detected
    assert report.iterations_run == 50


def test_pci_equal_share_solo():
    g, _ = build_graph(make_corpus([("P", 2000, ["A"], [])]))
    prev = with_values(g, pqi=np.array([0.75]))
    assert pci_step(g, prev, CFG)[0] == 0.75


def test_pci_equal_share_three_authors():
    g, _ = build_graph(make_corpus([("P", 2000, ["A", "B", "C"], [])]))
    prev = with_values(g, pqi=np.array([0.6]))
    np.testing.assert_allclose(pci_step(g, prev, CFG), [0.2, 0.2, 0.2], rtol=0, atol=1e-15)


def test_pci_alpha_one_credit_by_c3():
    g, _ = build_graph(make_corpus([("P", 2000, ["A", "B"], [])]))
    prev = with_values(g, pqi=np.array([0.9]), c3=np.array([2.0, 1.0]))
    pci = pci_step(g, prev, SolverConfig(alpha=1.0))
    np.testing.assert_allclose(pci, [0.6, 0.3], rtol=0, atol=1e-15)
    assert pci.sum() == pytest.approx(0.9)


def test_pci_zero_weight_denominator_is_fatal():
    g, _ = build_graph(make_corpus([("P", 2000, ["A", "B"], [])]))
    prev = with_values(g, c3=np.zeros(2))
    with pytest.raises(FloatingPointError):
        pci_step(g, prev, SolverConfig(alpha=1.0))
    # 0 ** 0 == 1: alpha = 0 still splits equally
    prev = with_values(g, c3=np.zeros(2), pqi=np.array([1.0]))
    np.testing.assert_array_equal(pci_step(g, prev, CFG), [0.5, 0.5])


def test_c3_step():
    z = np.zeros(1)
    assert c3_step(z, z, z, CFG)[0] == 0.5
    assert c3_step(np.array([0.75]), z, np.array([0.75]), CFG)[0] == 1.25
    s = np.array([0.3, 1.1, 2.0])
    one = c3_step(s / 3, s / 3, s / 3, CFG)
    two = c3_step(2 * s / 3, 2 * s / 3, 2 * s / 3, CFG)
    np.testing.assert_allclose(one, 0.5 + 0.5 * s)
    np.testing.assert_allclose(two, 0.5 + s)


# -- full solve -----------------------------------------------------------


def test_two_author_fixed_point(two_author_graph):
    g = two_author_graph
    scores, report = solve(g)
    assert report.converged
    x, y = g.author_index("X"), g.author_index("Y")
    p1, p2 = g.paper_index("P1"), g.paper_index("P2")
    expected = {
        "pqi": {p1: 0.75, p2: 0.5},
        "aci": {x: 0.75, y: 0.5},
        "aai": {x: 0.0, y: 0.0},
        "pci": {x: 0.75, y: 0.5},
        "c3": {x: 1.25, y: 1.0},
    }
    for name, vals in expected.items():
        for i, v in vals.items():
            assert abs(getattr(scores, name)[i] - v) <= 1e-9, name
    assert max_diff(scores, dense_oracle(g)) <= 1e-12


def test_empty_graph_converges_immediately():
    g, _ = build_graph(make_corpus([]))
    scores, report = solve(g)
    assert report.converged and report.iterations_run == 1
    assert all(v.size == 0 for v in scores.vectors())


def test_theta_zero_collapses_to_constants():
    g, _ = build_graph(random_corpus(1))
    scores, report = solve(g, SolverConfig(theta=0.0))
    assert report.converged
    np.testing.assert_array_equal(scores.pqi, 1.0)
    np.testing.assert_array_equal(scores.aci, 1.0)
    np.testing.assert_array_equal(scores.c3, 1.0)


def test_report_deltas_shape(two_author_graph):
    _, report = solve(two_author_graph)
    assert report.deltas.shape == (report.iterations_run, 5)
    assert report.final_delta == report.deltas[-1].max()
    assert report.final_delta < 1e-9


def test_oracle_size_guard():
    papers = [(f"p{i:03d}", 2000, [f"a{i:03d}"], []) for i in range(150)]
    g, _ = build_graph(make_corpus(papers))
    with pytest.raises(ValueError):
        dense_oracle(g)


@pytest.mark.parametrize("seed", range(12))
def test_oracle_equivalence(seed):
    corpus = random_corpus(seed)
    alpha = (0.0, 0.5, 1.0)[seed % 3]
    weighted = seed % 2 == 0
    g, _ = build_graph(corpus, GraphBuildOptions(weighted=weighted, include_self_citations=seed % 4 == 1))
    cfg = SolverConfig(alpha=alpha)
    scores, _ = solve(g, cfg)
    assert max_diff(scores, dense_oracle(g, cfg)) <= 1e-9


# -- properties -----------------------------------------------------------


def _trace(graph, cfg=CFG):
    states = []
    scores, report = solve(graph, cfg, callback=states.append)
    return states, report


@pytest.mark.parametrize("seed", range(10))
def test_floors(seed):
    states, _ = _trace(build_graph(random_corpus(seed))[0])
    for s in states:
        assert np.all(s.pqi >= 0.5) and np.all(s.aci >= 0.5) and np.all(s.c3 >= 0.5)
        assert all(np.all(np.isfinite(v)) and np.all(v >= 0) for v in s.vectors())


@pytest.mark.parametrize("seed", range(10))
def test_l1_contraction_of_pqi_and_aci(seed):
    g, _ = build_graph(random_corpus(seed))
    states, _ = _trace(g)
    states = [init_scores(g)] + states
    for name in ("pqi", "aci"):
        d = [np.abs(getattr(b, name) - getattr(a, name)).sum() for a, b in zip(states, states[1:])]
        for before, after in zip(d, d[1:]):
            assert after <= 0.5 * before + 1e-12


def test_max_norm_delta_may_grow():
    # P1 cited by three single-reference papers, each cited by one leaf paper.
    # Max-norm deltas of PQI go 1, 0.25, 0.375: the update matrix has column
    # sums <= 1 but row sums up to 3, so only the L1 norm contracts.
    papers = [("P1", 2000, ["A"], [])]
    for i in range(3):
        papers.append((f"M{i}", 2000, ["A"], ["P1"]))
        papers.append((f"L{i}", 2000, ["A"], [f"M{i}"]))
    g, _ = build_graph(make_corpus(papers))
    _, report = solve(g)
    np.testing.assert_allclose(report.deltas[:3, 0], [1.0, 0.25, 0.375])


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_pci_conservation(seed, alpha):
    states, _ = _trace(build_graph(random_corpus(seed))[0], SolverConfig(alpha=alpha))
    prev_pqi = np.ones(states[0].pqi.size)
    for s in states:
        # PCI at t distributes PQI from t-1
        assert abs(s.pci.sum() - prev_pqi.sum()) <= 1e-9 * prev_pqi.sum()
        prev_pqi = s.pqi


def _components(graph):
    from scipy.sparse.csgraph import connected_components

    return connected_components(graph.coauthorship, directed=False)[1]


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("mode", ["midpoint", "none"])
def test_aai_component_mass(seed, mode):
    g, _ = build_graph(random_corpus(seed))
    labels = _components(g)
    states, _ = _trace(g, SolverConfig(aai_cycle_handling=mode, max_iters=300))
    for comp in np.unique(labels):
        members = labels == comp
        if members.sum() < 2:
            continue
        for s in states:
            assert abs(s.aai[members].sum() - members.sum()) <= 1e-9 * members.sum()


@pytest.mark.parametrize("seed", range(5))
def test_alpha_zero_equal_share_exact(seed):
    g, _ = build_graph(random_corpus(seed))
    scores, _ = solve(g)
    prev = with_values(g, pqi=scores.pqi, c3=scores.c3 * 3.7)
    pci = pci_step(g, prev, CFG)
    explicit = np.zeros(g.n_authors)
    for p in range(g.n_papers):
        authors = g.authors_of(p)
        share = prev.pqi[p] / len(authors)
        for a in authors:
            explicit[a] += share
    np.testing.assert_array_equal(pci, explicit)


@pytest.mark.parametrize("seed", range(5))
def test_relabeling_permutes_scores(seed):
    corpus = random_corpus(seed)
    rng = np.random.default_rng(100 + seed)
    perm = rng.permutation(200)
    rename_a = {f"a{i:02d}": f"z{perm[i]:03d}" for i in range(30)}
    rename_p = {f"p{i:02d}": f"q{perm[i]:03d}" for i in range(60)}
    relabeled = make_corpus(
        [(rename_p[p.id], p.year, [rename_a[a] for a in p.author_names], [rename_p[r] for r in p.ref_ids])
         for p in corpus.papers]
    )
    g1, _ = build_graph(corpus)
    g2, _ = build_graph(relabeled)
    s1, _ = solve(g1)
    s2, _ = solve(g2)
    for name, old in rename_a.items():
        if name in g1.author_names:
            i, j = g1.author_index(name), g2.author_index(old)
            for v1, v2 in zip(s1.vectors()[1:], s2.vectors()[1:]):
                assert v1[i] == pytest.approx(v2[j], abs=1e-12)
    for name, old in rename_p.items():
        if name in g1.paper_ids:
            assert s1.pqi[g1.paper_index(name)] == pytest.approx(s2.pqi[g2.paper_index(old)], abs=1e-12)


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_threads_bitwise_identical(threads):
    g, _ = build_graph(random_corpus(7))
    s1, r1 = solve(g)
    s2, r2 = solve(g, threads=threads)
    assert r1.iterations_run == r2.iterations_run
    assert np.array_equal(r1.deltas, r2.deltas)
    for a, b in zip(s1.vectors(), s2.vectors()):
        assert a.tobytes() == b.tobytes()
