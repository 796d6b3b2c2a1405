import math
from fractions import Fraction

import pytest

from coregf import graphs as G
from coregf import oracle
from coregf import series as S


@pytest.fixture(scope="module")
def C6():
    return G.all_connected_series(6)


def test_connected_counts(C6):
    assert G.labelled_counts(C6.univariate()) == [0, 1, 1, 4, 38, 728, 26704]


def test_rooted_refinement_is_validated(C6):
    bad = C6.rooted + C6.rooted.ring.monomial({"x": 2, "y": 1, "w": 1}, 1)
    with pytest.raises(ValueError):
        G.ConnectedInput(C6.C, bad)


def test_non_integral_input_rejected():
    ring = G._xy_ring(3)
    with pytest.raises(ValueError):
        G.ConnectedInput(ring.monomial({"x": 2, "y": 1}, Fraction(1, 3)))


def test_trees():
    T, U, Tw = G.tree_series(7)
    assert [T.labelled_count(n) for n in range(1, 8)] == [n ** (n - 1) for n in range(1, 8)]
    assert [U.labelled_count(n) for n in range(1, 8)] == [max(1, n ** (n - 2)) for n in range(1, 8)]
    assert Tw.specialize(w=1) == T


def test_two_graphs_vs_sweep(C6):
    H = G.two_graph_series(C6, 6)
    assert G.labelled_counts(H) == [0] + [oracle.count_graphs(n, min_degree=2) for n in range(1, 7)]


def test_core_equation_round_trip(C6):
    Hb = G.two_graph_series(C6, 6, bivariate=True)
    assert G.connected_from_two_graphs(Hb) == C6.C
    assert G.labelled_table(Hb, 4) == {4: 3, 5: 6, 6: 1}


def test_planar_oracle_input():
    P = G.oracle_planar_series(5)
    assert G.labelled_counts(G.two_graph_series(P, 5)) == [0, 0, 0, 1, 10, 252]


def test_core_histogram(C6):
    F = G.core_marked_graphs(C6, 5)
    for n in (3, 4, 5):
        assert G.labelled_table(F, n) == oracle.core_histogram(n)
    assert G.labelled_counts(F.specialize(u=1)) == G.labelled_counts(C6.univariate(), 5)


def test_tree_size_marked(C6):
    F = G.tree_size_marked(C6, 2, 5)
    assert G.labelled_counts(F.specialize(w=1)) == G.labelled_counts(C6.univariate(), 5)


def test_kernel_routes(C6):
    a = G.kernel_series_closed(C6)
    b = G.kernel_series_chain(C6)
    assert a == b
    got = G.labelled_counts(a.specialize(y=1))
    assert got == [0] + [oracle.count_graphs(n, min_degree=3) for n in range(1, 7)]


def test_multigraph_chain_routes():
    C = G.all_connected_series(5)
    Ct = G.multigraph_lift(C, 5)
    K1 = G.multigraph_kernel(Ct)
    K2 = G.multigraph_kernel_from_core(G.multigraph_core(Ct))
    assert K1 == K2
    assert G.simple_specialization(K1) == G.kernel_series_closed(C, 5)
    assert G.simple_specialization(Ct) == C.C


def _weighted_degree(n, loops, prof):
    return n + loops + sum(i * b for i, b in enumerate(prof))


def _series_by_profile(F, n):
    out = {}
    for key, v in F.items():
        if key[0] != n:
            continue
        prof = tuple(key[2:])
        while prof and prof[-1] == 0:
            prof = prof[:-1]
        out[(key[1], prof)] = Fraction(v.numerator, v.denominator) * math.factorial(n)
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("what", ["lift", "core", "kernel"])
def test_multigraph_series_vs_weighted_sweep(n, what):
    order = 5
    C = G.all_connected_series(order)
    Ct = G.multigraph_lift(C, order)
    F = {"lift": Ct, "core": G.multigraph_core(Ct), "kernel": G.multigraph_kernel(Ct)}[what]
    md = {"lift": 0, "core": 2, "kernel": 3}[what]
    loops = order - n
    mult = order - n + 1
    ref = oracle.multigraph_weights(n, loops, mult, True, md)
    ref = {k: v for k, v in ref.items() if _weighted_degree(n, *k) <= order}
    assert _series_by_profile(F, n) == ref


def test_rooted_two_graph_degree(C6):
    Hd = G.rooted_two_graph_degree(C6, 5)
    for n in range(1, 6):
        assert {k: v for k, v in G.labelled_table(Hd, n).items() if v} == oracle.count_rooted_by_degree(n, "2-graph")
    assert Hd.coefficient((3, 2)) == Fraction(1, 2)
    assert Hd.coefficient((4, 2)) == 1
    assert Hd.coefficient((4, 3)) == Fraction(2, 3)


def test_rooted_kernel_degree(C6):
    Kd = G.rooted_kernel_degree(C6, 6)
    for n in range(1, 7):
        assert {k: v for k, v in G.labelled_table(Kd, n).items() if v} == oracle.count_rooted_by_degree(n, "3-graph")
    assert all(k >= 3 for (_, k), v in Kd.items() if v)


def test_user_input_round_trip(C6, tmp_path):
    text = S.dumps(C6.C)
    C = G.load_connected_input(text)
    assert G.labelled_counts(G.two_graph_series(C, 5)) == G.labelled_counts(G.two_graph_series(C6, 5))
    with pytest.raises(ValueError):
        G.rooted_two_graph_degree(C)
