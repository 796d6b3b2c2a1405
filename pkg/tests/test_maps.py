import math
from fractions import Fraction

import mpmath
import pytest
import sympy

from coregf import maps
from coregf.algebraic import QSqrt6


def test_tutte_formula_small():
    assert [maps.tutte_count(n) for n in range(1, 7)] == [2, 9, 54, 378, 2916, 24057]


def test_three_routes_agree():
    n = 40
    a = maps.map_series_closed_form(n)
    b = maps.map_series_tutte(n)
    c = maps.map_degree_series(n).specialize(u=1)
    assert a == b
    assert c.coefficient_list() == b.coefficient_list()


def test_generic_catalytic_solver_matches():
    from coregf import series as S

    F = S.solve_fixed_point(maps.catalytic_equation(8), 8)
    assert F.specialize(u=1).coefficient_list() == maps.map_series_tutte(8).coefficient_list()


def test_two_and_three_maps():
    assert [int(c) for c in maps.two_map_series(5).coefficient_list()][1:] == [1, 3, 16, 96, 624]
    assert [int(c) for c in maps.three_map_series(5).coefficient_list()][2:] == [2, 9, 47, 278]


def test_substitutions_invert():
    K = maps.three_map_series(15)
    H = maps.two_map_series(15)
    M = maps.map_series_tutte(15)
    assert maps.two_map_from_three(K) == H
    assert maps.map_from_two_map(H) == M


def test_core_marked_marginals():
    F = maps.core_marked(8)
    assert F.specialize(u=1).coefficient_list() == maps.map_series_tutte(8).coefficient_list()
    dist = maps.size_distribution(F, 3)
    assert sum(dist.values()) == 54


def test_kernel_marked_marginal():
    F = maps.kernel_marked_2map(8)
    assert F.specialize(u=1).coefficient_list() == maps.two_map_series(8).coefficient_list()


def test_mean_core_size_approaches_limit():
    r = float(maps.mean_core_size(200)) / 200
    assert abs(r - math.sqrt(6) / 3) < 0.01


def test_tree_marked_counts_trees():
    F = maps.tree_size_marked(1, 6)
    assert F.specialize(w=1).coefficient_list() == maps.map_series_tutte(6).coefficient_list()


def test_attached_tree_sums():
    total, tail = maps.attached_tree_partial_sum(60)
    with mpmath.workdps(50):
        assert abs(total - mpmath.sqrt(6) / 3) <= tail
        a1, _ = maps.attached_tree_stats(1)
        assert abs(a1 - (4 + 5 * mpmath.sqrt(6) / 3) / 12) < 1e-40


def test_map_constants():
    c = maps.map_constants()
    assert c.sigma == QSqrt6(5, -2)
    assert c.tau == QSqrt6(Fraction(-1, 2), Fraction(1, 4))
    assert abs(c.kappa2 - mpmath.mpf("0.6797")) < 5e-5
    assert abs(c.kappa3 - mpmath.mpf("0.5209")) < 5e-5
    k2, k3 = maps.kappa_from_singular_expansion()
    assert abs(k2 - c.kappa2) < 1e-30 and abs(k3 - c.kappa3) < 1e-30


def test_quasi_powers_forms():
    stats = maps.quasi_stats_maps()
    for name, pair in maps.STATED_FORMS.items():
        for got, want in zip(stats[name], pair):
            assert sympy.simplify(got - want) == 0


def test_root_degree_series():
    Hd = maps.two_map_degree(6)
    assert Hd.specialize(w=1).coefficient_list() == maps.two_map_series(6).coefficient_list()
    Kd = maps.three_map_degree(6)
    assert Kd.specialize(u=1).coefficient_list()[:7] == maps.three_map_series(6).coefficient_list()
    assert all(k >= 3 for (_, k), v in Kd.items() if v)


def test_degree_distributions():
    dm, dh, dk = maps.degree_distributions(40)
    assert dm.coefficients[0] == 0
    assert maps.p_maps(1) == 1
    assert all(c == 0 for c in dk.coefficients[:3])
    for d in (dm, dh, dk):
        assert abs(d.pgf_at_one() - 1) < 1e-30
    assert abs(dh.tail.amplitude - mpmath.mpf("0.1158")) < 5e-4
    assert abs(dk.tail.amplitude - mpmath.mpf("0.1288")) < 5e-4
    with mpmath.workdps(50):
        assert abs(dh.tail.growth - mpmath.sqrt(mpmath.mpf(2) / 3)) < 1e-40


@pytest.mark.parametrize("which", [0, 1, 2])
def test_tail_amplitudes_match_numeric(which):
    d = maps.degree_distributions(10)[which]
    assert abs(maps.tail_amplitude_numeric(d) - d.tail.amplitude) < 1e-8


def test_exact_p_maps_coefficients_match_closed_form():
    pm = maps.p_maps_series(20)
    with mpmath.workdps(40):
        u = mpmath.mpf("0.3")
        approx = sum(mpmath.mpf(c.numerator) / c.denominator * u ** k for k, c in enumerate(pm.coefficient_list()))
        assert abs(approx - maps.p_maps(u)) < 1e-8
