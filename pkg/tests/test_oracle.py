import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coregf import oracle
from coregf.oracle import SmallGraph, WeightedMultigraph


def test_connected_counts():
    assert [oracle.count_graphs(n) for n in range(1, 7)] == [1, 1, 4, 38, 728, 26704]


def test_planar_filter():
    assert oracle.count_graphs(5, planar=True) == 727
    assert not oracle.is_planar(SmallGraph.from_edges(5, itertools.combinations(range(5), 2)))
    k33 = SmallGraph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)])
    assert not oracle.is_planar(k33)


def test_min_degree_counts():
    assert [oracle.count_graphs(n, min_degree=2) for n in range(3, 6)] == [1, 10, 253]
    assert [oracle.count_graphs(n, min_degree=3) for n in range(4, 7)] == [1, 26, 1858]


def test_sweep_matches_networkx_connectivity():
    n = 5
    masks = set(int(m) for m in oracle.graph_masks(n))
    for mask in range(1 << 10):
        g = SmallGraph.from_mask(n, mask)
        assert (mask in masks) == nx.is_connected(g.to_networkx())


def test_thread_count_does_not_change_results():
    a = oracle.graph_masks(7, True, 2, workers=1)
    b = oracle.graph_masks(7, True, 2, workers=2)
    assert np.array_equal(a, b)
    assert oracle.count_by_edges(6, workers=1) == oracle.count_by_edges(6, workers=3)


def test_caps():
    with pytest.raises(oracle.CapError):
        oracle.graph_masks(oracle.MAX_SWEEP_VERTICES + 1)
    with pytest.raises(oracle.CapError):
        oracle.enumerate_rooted_maps(oracle.MAX_MAP_EDGES + 1)


graphs = st.integers(min_value=1, max_value=7).flatmap(
    lambda n: st.integers(min_value=0, max_value=(1 << (n * (n - 1) // 2)) - 1).map(
        lambda m: SmallGraph.from_mask(n, m)))


@settings(max_examples=150, deadline=None)
@given(graphs, st.permutations(range(7)))
def test_core_is_idempotent_and_order_free(g, perm):
    core = oracle.core_of(g)
    assert oracle.core_of(core) == core
    order = [v for v in perm if v < g.n]
    assert oracle.k_core(g, 2, order) == oracle.k_core(g, 2)
    assert all(d == 0 or d >= 2 for d in core.degrees())
    expected = set(nx.k_core(g.to_networkx(), 2).nodes())
    assert {v for v in range(g.n) if oracle.k_core(g, 2) >> v & 1} == expected


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_kernel_has_min_degree_three(g):
    ker = oracle.kernel_of(g)
    if ker is None:
        return
    assert min(ker.degrees()) >= 3
    assert ker.check_weight()
    assert 0 < ker.weight <= 1
    assert (ker.weight == 1) == ker.is_simple()
    core = oracle.core_of(g)
    # contraction keeps edges minus the degree-2 vertices removed
    twos = sum(1 for d in core.degrees() if d == 2)
    assert ker.edge_count() == core.edge_count() - twos


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multigraph_weights_bounds(n):
    for mg in oracle.enumerate_multigraphs(n, 2, 2, connected=False):
        assert 0 < mg.weight <= 1
        assert (mg.weight == 1) == mg.is_simple()


def test_weight_formula():
    mg = WeightedMultigraph.build(2, (2, 0), [(0, 1, 3)])
    assert mg.weight == Fraction(1, 8) * Fraction(1, 6)


def test_attached_trees():
    # triangle with a pendant path of two vertices at vertex 0
    g = SmallGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)])
    assert oracle.attached_tree_sizes(g) == {0: 3, 1: 1, 2: 1}
    assert oracle.largest_attached_tree(g, include_root=False) == 2
    with pytest.raises(ValueError):
        oracle.attached_tree_sizes(SmallGraph.from_edges(2, [(0, 1)]))


def test_core_histogram():
    assert oracle.core_histogram(4) == {0: 16, 3: 12, 4: 10}


def test_rooted_maps():
    counts = [oracle.enumerate_rooted_maps(n).rooted for n in range(1, 5)]
    assert counts == [2, 9, 54, 378]
    sw = oracle.enumerate_rooted_maps(4)
    assert sw.min_degree_counts == {2: 96, 3: 47}
    assert sum(sw.root_vertex_degree.values()) == 378


def test_map_pairs():
    # unrooted-by-dart labelled pairs: 2 maps on 1 edge, 54 pairs on 2 edges
    assert [oracle.count_map_pairs(n) for n in (1, 2)] == [2, 54]


def test_exported_series():
    C = oracle.connected_series(4)
    assert C.labelled_count((4, 3)) == 16
    R = oracle.rooted_connected_series(3)
    # paths on three vertices: one middle vertex each; triangles: every vertex has degree 2
    assert R.labelled_count((3, 2, 2)) == 3
    assert R.labelled_count((3, 2, 1)) == 6
    assert R.labelled_count((3, 3, 2)) == 3
