from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coregf import series as S
from coregf.series import EGF, OGF, SeriesRing

CAP = 6
R1 = S.univariate_ring("x", CAP)
R2 = SeriesRing.make(("x", "y"), caps={"x": 4, "y": 3})

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series1(draw, ring=R1, const=None):
    coeffs = draw(st.lists(small, min_size=CAP + 1, max_size=CAP + 1))
    if const is not None:
        coeffs[0] = Fraction(const)
    return S.from_coefficients(coeffs, "x", cap=CAP)


@st.composite
def series2(draw):
    c = {}
    for i in range(5):
        for j in range(4):
            v = draw(small)
            if v:
                c[(i, j)] = v
    return S.ExactSeries(R2, c)


@settings(max_examples=40, deadline=None)
@given(series2(), series2(), series2())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R2.zero()
    assert a * R2.one() == a


@settings(max_examples=30, deadline=None)
@given(series1(const=1))
def test_inverse_and_exp_log(f):
    assert f * f.inverse() == R1.one()
    assert S.exp(S.log(f)) == f


@settings(max_examples=30, deadline=None)
@given(series1(const=0), series1(const=0), series1())
def test_composition_is_associative_and_a_homomorphism(g, h, f):
    gh = S.compose(g, h)
    assert S.compose(S.compose(f, g), h) == S.compose(f, gh)
    f2 = f * f
    assert S.compose(f2, g) == S.compose(f, g) ** 2


@settings(max_examples=30, deadline=None)
@given(series1(const=0))
def test_reversion(g):
    if g.coefficient(1) == 0:
        g = g + R1.gen("x")
    r = S.reversion(g)
    assert S.compose(g, r) == R1.gen("x")
    assert S.compose(r, g) == R1.gen("x")


def test_binomial_series_matches_power():
    x = R1.gen("x")
    assert S.binomial_series(R1, "x", Fraction(-1, 2), 3) == S.power(1 + 3 * x, Fraction(-1, 2))
    assert S.sqrt(1 + x) ** 2 == 1 + x


def test_geometric_and_division():
    x = R1.gen("x")
    assert S.geometric(R1, x) == 1 / (1 - x)
    assert (1 / (1 - x)).coefficient_list() == [1] * (CAP + 1)


def test_truncation_is_enforced():
    x = R1.gen("x")
    with pytest.raises(S.TruncationError):
        (x ** 3).coefficient(CAP + 1)
    assert (x ** 4) * (x ** 4) == R1.zero()


def test_labelled_count_and_integrality():
    ring = S.univariate_ring("x", 5, EGF)
    e = S.exp(ring.gen("x"))
    assert [e.labelled_count(n) for n in range(6)] == [1] * 6
    half = ring.monomial({"x": 1}, Fraction(1, 2))
    with pytest.raises(S.IntegralityError):
        half.labelled_count(1)


def test_specialize_only_on_uncapped_variables():
    ring = SeriesRing.make(("x", "u"), caps={"x": 3, "u": None})
    x, u = ring.gens()
    f = x * (1 + u) ** 2
    assert f.specialize(u=1) == 4 * ring.without("u").gen("x")
    capped = SeriesRing.make(("x", "u"), caps={"x": 3, "u": 3})
    with pytest.raises(S.SeriesError):
        capped.gen("x").specialize(u=1)


def test_compose_rejects_unsound_images():
    x = R1.gen("x")
    with pytest.raises(S.SeriesError):
        S.compose(1 / (1 - x), 1 + x)


def test_weighted_ring_audit():
    ring = SeriesRing.make(("x", "y"), caps={"x": None, "y": None}, weights={"x": 1, "y": 2}, total_cap=4)
    x, y = ring.gens()
    f = 1 / (1 - x - y)
    assert f.coefficient((0, 2)) == 1
    assert f.coefficient((2, 1)) == 3
    # y has weight 2, so an image of grade 1 would be unsound
    with pytest.raises(S.SeriesError):
        S.compose(f, {"x": x, "y": x}, target=ring)


def test_divided_difference():
    ring = SeriesRing.make(("z", "u"), caps={"z": 3, "u": None})
    z, u = ring.gens()
    f = u ** 3 * z + u * z ** 2
    # (u f(u) - f(1))/(u - 1)
    d = S.divided_difference(f, "u")
    assert d * (u - 1) == u * f - f.specialize(u=1).embed(ring)


def test_functional_equation_catalan():
    ring = S.univariate_ring("z", 10)
    eq = S.FunctionalEquation(lambda F: 1 + F.ring.gen("z") * F * F, ring, "z")
    C = S.solve_fixed_point(eq, 10)
    assert [int(c) for c in C.coefficient_list()] == [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]


@settings(max_examples=20, deadline=None)
@given(series2())
def test_document_round_trip(f):
    assert S.loads(S.dumps(f)) == f


@pytest.mark.parametrize(
    "doc",
    [
        {"format": "other"},
        {"format": "exact-series/1", "variables": ["x"], "semantics": {"x": "ogf"},
         "truncation": {"caps": {"x": 2}}, "entries": [[[3], "1/1"]]},
        {"format": "exact-series/1", "variables": ["x"], "semantics": {"x": "ogf"},
         "truncation": {"caps": {"x": 2}}, "entries": [[[1], 0.5]]},
        {"format": "exact-series/1", "variables": ["x"], "semantics": {"x": "ogf"},
         "truncation": {"caps": {"x": 2}}, "entries": [[[1, 2], "1/2"]]},
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(S.SeriesError):
        S.from_document(doc)
