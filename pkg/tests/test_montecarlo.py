import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coregf import montecarlo as MC
from coregf.algebraic import QSqrt6


@pytest.fixture(scope="module", params=MC.BASES)
def law(request):
    return MC.law_for(request.param)


def test_law_normalised(law):
    law.check()
    assert law.tail_mass < MC.TAIL_TARGET
    assert law.k_cut >= 5


def test_maps_law_exact():
    law = MC.maps_law()
    rest = 1 - sum(law.exact, QSqrt6(0))
    assert rest > 0
    assert float(rest) == pytest.approx(law.tail_mass, rel=1e-12)
    # beta_1 = (5 + 2 sqrt 6)/12
    assert law.exact[0] == QSqrt6(5, 2) / 12


def test_tail_asymptotics(law):
    k = 300
    c = MC.gamma_constant(law.base, law=law)
    assert abs(law.pmf(k) / (c * k ** -1.5 * law.ratio ** k) - 1) < 0.01


def test_envelope_dominates(law):
    for k in range(law.k_cut + 1, law.k_cut + 80):
        assert law.pmf(k) <= law.amp * law.ratio ** k


def _two_term(m):
    # C m g^{-3/2} 3^{-g} = 1 gives g = log_3 m - (3/2) log_3 log m + O(1)
    return math.log(m, 3) - 1.5 * math.log(math.log(m), 3)


def test_solve_gamma_shape():
    g = MC.solve_gamma(10 ** 6, "maps")
    assert abs(g - _two_term(10 ** 6)) < 3
    c = MC.gamma_constant("maps")
    assert c * 10 ** 6 * g ** -1.5 * 3.0 ** -g == pytest.approx(1, rel=1e-10)
    with pytest.raises(ValueError):
        MC.solve_gamma(1, "maps")


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e3, max_value=1e12))
def test_doubling_m_adds_about_log3_2(m):
    g = MC.solve_gamma(m, "maps")
    d = MC.solve_gamma(2 * m, "maps") - g
    # dg/dlog m = 1/(log 3 + 3/(2g)), slightly below 1/log 3
    assert d < math.log(2, 3)
    assert math.log(2, 3) - d < math.log(2, 3) * 1.5 / (g * math.log(3)) + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=1e3, max_value=1e15))
def test_constant_does_not_change_growth(c, m):
    g = MC.solve_gamma(m, "maps", constant=c)
    assert abs(g - _two_term(m)) < abs(math.log(c, 3)) + 3


def test_reference_cdfs_increase():
    for base in MC.BASES:
        vals = [MC.reference_cdf(base, x) for x in np.linspace(-4, 4, 17)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert MC.reference_cdf(base, 0.5) > MC.reference_cdf(base, 0)
        assert vals[0] < 0.01 and vals[-1] > 0.9


def test_m_equal_one_reproduces_the_law():
    law = MC.maps_law()
    r = MC.sample_max_experiment(law, 1, 20000, seed=5)
    for k, e, ex, se in zip(r.levels, r.empirical, r.exact, r.stderr):
        assert ex == pytest.approx(1 - law.tail(k))
        assert abs(e - ex) <= 4 * math.sqrt(ex * (1 - ex) / r.reps) + 1 / r.reps


def test_determinism_and_worker_independence():
    law = MC.maps_law()
    a = MC.sample_max_experiment(law, 10 ** 5, 200, seed=11)
    b = MC.sample_max_experiment(law, 10 ** 5, 200, seed=11, workers=2)
    assert a == b
    assert a.to_csv() == b.to_csv()
    c = MC.sample_max_experiment(law, 10 ** 5, 200, seed=12)
    assert a.empirical != c.empirical


def test_empirical_cdf_monotone_and_close_to_exact(law):
    r = MC.sample_max_experiment(law, 10 ** 6, 2000, seed=3)
    assert all(b >= a for a, b in zip(r.empirical, r.empirical[1:]))
    for e, ex, se in zip(r.empirical, r.exact, r.stderr):
        assert abs(e - ex) <= 4 * max(se, 1 / r.reps)


def test_tail_sampler_frequency():
    # a cut far below the natural one makes tail draws common
    base = MC.maps_law()
    cut = 4
    tail_mass = base.tail_mass + sum(base.probs[cut:])
    amp = (5 + 2 * math.sqrt(6)) / math.sqrt(math.pi) * (cut + 1) ** -1.5
    law = MC.TreeSizeLaw("maps", base.probs[:cut], tail_mass, 1 / 3, amp, sigma=base.sigma)
    maxima, window, tails = MC.simulate(law, 1000, 400, seed=9, lo=5, hi=8)
    n = 1000 * 400
    se = math.sqrt(tail_mass * (1 - tail_mass) / n)
    assert abs(tails.sum() / n - tail_mass) < 3 * se
    # drawn tail values follow the law restricted to k > cut
    freq = window.sum(axis=0) / tails.sum()
    for j, f in zip(range(5, 9), freq):
        p = base.pmf(j) / tail_mass
        assert abs(f - p) < 4 * math.sqrt(p * (1 - p) / tails.sum())


def test_poisson_report(law):
    rep = MC.poisson_count_check(law, 10 ** 6, 3000, seed=4)
    for row in rep.rows:
        assert abs(row.empirical_mean - row.exact_mean) <= 0.05 * row.exact_mean + 4 * math.sqrt(row.exact_mean / 3000)
        assert row.tv_exact < 0.05
    assert all(abs(c) < 0.05 for _, c in rep.correlations)
    assert rep.to_csv().startswith("j,lemma_mean")
