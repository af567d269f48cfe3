import pytest

from freeprod import agraph as ag
from freeprod.errors import ChiNonNegative, FactorFreeViolation, MalformedCertificate, RetriesExhausted
from freeprod.instances import InstanceSpec, generate
from freeprod.maxedges import (
    MaximalEdgeCertificate,
    Ray,
    check_certificate,
    find_all_certified,
    find_one_maximal_edge,
    is_good_cut,
    verify_edge_count_bound,
)
from freeprod.pullback import pullback
from freeprod.words import invert, is_strongly_positive

from conftest import build

RANK3 = build("g1 g2", "g2 g1", "g1^2 g2^2")
RANK2 = build("g1 g2", "g2 g1")


def disjoint(g, h):
    n = g.n_vertices
    return ag.AGraph(g.vtype + h.vtype, g.edges + tuple((p + n, s + n, lab) for p, s, lab in h.edges))


def chi_negative_graphs(n, seed):
    spec = InstanceSpec(seed=seed)
    out = []
    i = 0
    while len(out) < n:
        try:
            inst = generate(spec, i)
        except RetriesExhausted:
            i += 1
            continue
        i += 1
        for g in (*inst.graphs, pullback(*inst.graphs).graph):
            c = ag.core(g)
            if ag.euler_char(c) < 0:
                out.append(c)
    return out


def test_spec_style_rank_three_example_is_not_factor_free():
    # (ab)^-1 (ab^-1a) (ba)^-1 = b^-3 lies in the second factor
    with pytest.raises(FactorFreeViolation) as info:
        build("g1 g2", "g2 g1", "g1 g2^-1 g1")
    assert info.value.factor == 2


def test_maximal_edge_on_rank_three_core():
    c = ag.core(RANK3)
    assert ag.euler_char(c) == -2
    e, cert = find_one_maximal_edge(c)
    assert check_certificate(c, e, cert)
    assert check_certificate(c, e, cert, depth=2)


def test_maximal_edge_needs_negative_chi():
    with pytest.raises(ChiNonNegative):
        find_one_maximal_edge(ag.core(build("g1 g2")))
    with pytest.raises(ChiNonNegative):
        find_one_maximal_edge(disjoint(ag.core(build("g1 g2")), ag.core(build("g2 g1^2"))))


def test_broken_certificates_are_rejected():
    c = ag.core(RANK3)
    e, cert = find_one_maximal_edge(c)
    # swapping the rays certifies the lower-type edge, which fails the type inequality
    assert not check_certificate(c, cert.q.first, cert.swapped())
    # reversing the cycle replaces its label by the inverse
    rev = tuple(x ^ 1 for x in reversed(cert.p.cycle))
    assert not is_strongly_positive(invert(c.path_label(rev)))
    assert not check_certificate(c, e, MaximalEdgeCertificate(Ray(cert.p.spine, rev), cert.q))
    with pytest.raises(MalformedCertificate):
        check_certificate(c, e, MaximalEdgeCertificate(Ray(cert.p.spine, cert.p.cycle[:-1]), cert.q))
    with pytest.raises(MalformedCertificate):
        check_certificate(c, e ^ 1, cert)


def test_find_all_examples():
    cyc = ag.core(build("g1 g2"))
    r = find_all_certified(cyc)
    assert r.edges == frozenset() and r.complete
    c = ag.core(RANK2)
    r = find_all_certified(c)
    assert len(r.edges) == 1 == -ag.euler_char(c)
    assert r.complete and is_good_cut(c, r.edges)
    for e, cert in r.certificates.items():
        assert check_certificate(c, e, cert)


def test_small_budget_stays_sound():
    c = ag.core(build("g1 g2", "g2 g1", "g1^2 g2^2", "g1^3 g2^3"))
    full = find_all_certified(c)
    assert full.complete
    for budget in (0, 2, 4):
        r = find_all_certified(c, budget=budget, max_nodes=50)
        assert r.edges <= full.edges
        assert r.complete == (r.edges == full.edges) or not r.complete
        for e, cert in r.certificates.items():
            assert check_certificate(c, e, cert)


def test_good_cut_examples():
    cyc = ag.core(build("g1 g2"))
    assert is_good_cut(cyc, [])
    c = ag.core(RANK2)
    assert not is_good_cut(c, [])
    good = [2 * k for k in range(c.n_edges) if is_good_cut(c, [2 * k])]
    assert good
    tree = ag.AGraph((0, 1, 0), ((0, 1, 0), (2, 1, 1)))
    assert not is_good_cut(tree, [])
    assert not is_good_cut(disjoint(cyc, tree), [])


def test_edge_count_chain_examples():
    rep = verify_edge_count_bound(pullback(build("g1 g2"), build("g1 g2")))
    assert rep.status == "consistent" and rep.d == 0
    rep = verify_edge_count_bound(pullback(RANK2, RANK2))
    assert rep.status == "consistent"
    assert (rep.rank12, rep.d, rep.d1, rep.d2) == (1, 1, 1, 1)
    assert rep.d <= rep.tau1_d * rep.tau2_d <= rep.d1 * rep.d2


def test_incomplete_searches_are_inconclusive():
    g = build("g1 g2", "g2 g1", "g1^2 g2^2")
    rep = verify_edge_count_bound(pullback(g, g), budget=0, max_nodes=1)
    assert rep.status in ("inconclusive", "consistent")
    assert rep.status != "violation"


def test_maximal_edge_on_random_graphs():
    for c in chi_negative_graphs(30, seed=31):
        e, cert = find_one_maximal_edge(c)
        assert check_certificate(c, e, cert)
        assert check_certificate(c, e, cert, depth=2)


def test_complete_sets_are_good_cuts():
    for c in chi_negative_graphs(30, seed=32):
        r = find_all_certified(c, max_nodes=20_000, max_cycles=2_000)
        if r.complete:
            assert len(r.edges) == -ag.euler_char(c)
            assert is_good_cut(c, r.edges)


def test_certificates_project_to_factors():
    spec = InstanceSpec(seed=33)
    for i in range(40):
        try:
            inst = generate(spec, i)
        except RetriesExhausted:
            continue
        p = pullback(*inst.graphs)
        r = find_all_certified(p.graph, max_nodes=20_000, max_cycles=2_000)
        for x, cert in r.certificates.items():
            for i_ in (1, 2):
                g = p.g1 if i_ == 1 else p.g2
                assert check_certificate(g, p.tau(i_, x), cert.map(lambda y: p.tau(i_, y)))
