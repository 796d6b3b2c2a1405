"""Rooted planar maps, 2-maps and 3-maps.

Series here are ordinary generating functions in the number of edges ``z``
(``x`` after the change of variables that inverts the tree substitution).
Marked variants use ``u`` for a size parameter or the root degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import sympy
from gmpy2 import mpq

from . import series as S
from .algebraic import SQRT6, QSqrt6, poly_at
from .series import OGF, ExactSeries, SeriesRing

WORK_DPS = 50


class SelfCheckError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class MapConstants:
    sigma: QSqrt6
    tau: QSqrt6
    growth2: QSqrt6
    growth3: QSqrt6
    kappa2: mpmath.mpf
    kappa3: mpmath.mpf

    def check(self) -> None:
        if self.sigma != self.tau / (1 + self.tau):
            raise SelfCheckError("sigma != tau/(1+tau)")
        if self.tau != self.sigma / (1 - self.sigma):
            raise SelfCheckError("tau != sigma/(1-sigma)")
        if self.sigma * self.growth2 != 1 or self.tau * self.growth3 != 1:
            raise SelfCheckError("growth constants are not reciprocal singularities")


SIGMA = QSqrt6(5, -2)
TAU = QSqrt6(Fraction(-1, 2), Fraction(1, 4))


def map_constants() -> MapConstants:
    with mpmath.workdps(WORK_DPS):
        k2 = 2 / mpmath.sqrt(mpmath.pi) * (mpmath.mpf(2) / 3) ** (mpmath.mpf(5) / 4)
        k3 = 2 / mpmath.sqrt(mpmath.pi) * (4 - 4 * mpmath.sqrt(mpmath.mpf(2) / 3)) ** (mpmath.mpf(5) / 2)
    c = MapConstants(SIGMA, TAU, QSqrt6(5, 2), QSqrt6(4, 2), k2, k3)
    c.check()
    return c


def kappa_from_singular_expansion() -> tuple:
    """Re-derive kappa2, kappa3 by pushing M's singular expansion through the substitutions.

    Near z = 1/12, M = 1/3 - 4/3 Z^2 + 8/3 Z^3 + ... with Z^2 = 1 - 12z.  Under
    x -> z = x/(1+x)^2 the local scale is Z^2 ~ c X^2 with X^2 = 1 - x/sigma and
    c = sigma * 12 z'(sigma), computed here by numeric differentiation.
    """
    with mpmath.workdps(WORK_DPS):
        s = SIGMA.to_mpf()
        t = TAU.to_mpf()
        zmap = lambda x: x / (1 + x) ** 2
        c2 = s * 12 * mpmath.diff(zmap, s)
        h3 = (1 - s) / (1 + s) * mpmath.mpf(8) / 3 * c2 ** mpmath.mpf(1.5)
        # K(x) = (H(x/(1+x)) - x)/(1+x); X_H^2 ~ c3 X_K^2 near x = tau
        c3 = t / s * mpmath.diff(lambda x: x / (1 + x), t)
        k3 = h3 * c3 ** mpmath.mpf(1.5) / (1 + t)
        g = mpmath.gamma(mpmath.mpf(-1.5))
        return h3 / g, k3 / g


# ---------------------------------------------------------------------------
# counts and the three routes to M(z)


def tutte_count(n: int) -> int:
    """Number of rooted planar maps with n edges (0 for n = 0 by convention)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0
    num = 2 * 3 ** n * math.comb(2 * n, n)
    q, r = divmod(num, (n + 2) * (n + 1))
    assert r == 0
    return q


def _ring(order: int, name: str = "z") -> SeriesRing:
    return S.univariate_ring(name, order, OGF)


def map_series_closed_form(order: int) -> ExactSeries:
    """M(z) = (18z - 1 + (1-12z)^{3/2}) / (54 z^2) - 1, expanded exactly."""
    wide = _ring(order + 2)
    z = wide.gen("z")
    num = 18 * z - 1 + S.binomial_series(wide, "z", mpq(3, 2), -12)
    c = {}
    for (k,), v in num.items():
        if k < 2:
            if v:
                raise SelfCheckError("numerator of the closed form is not divisible by z^2")
            continue
        c[(k - 2,)] = v / 54
    ring = _ring(order)
    return ExactSeries(ring, c) - 1


def map_series_tutte(order: int) -> ExactSeries:
    return ExactSeries(_ring(order), {(n,): tutte_count(n) for n in range(1, order + 1)})


def root_degree_polynomials(order: int) -> list:
    """Coefficients [z^n] M(z,u) as integer lists in u, for n = 0..order.

    This unrolls the fixed point of the catalytic equation one z-degree at a
    time: [z^n] of the right-hand side only involves [z^k] M for k < n.
    """
    polys = [[]]  # M_0 = 0

    def add_into(acc, p, shift=0, scale=1):
        need = len(p) + shift
        if len(acc) < need:
            acc.extend([0] * (need - len(acc)))
        for i, c in enumerate(p):
            if c:
                acc[i + shift] += scale * c

    for n in range(1, order + 1):
        # [z^{n-1}] (M+1)^2 = 2 M_{n-1} + sum_{i+j=n-1} M_i M_j + [n == 1]
        sq = []
        if n == 1:
            sq = [1]
        else:
            add_into(sq, polys[n - 1], scale=2)
            for i in range(1, n - 1):
                j = n - 1 - i
                if i > j:
                    break
                prod = _poly_mul(polys[i], polys[j])
                add_into(sq, prod, scale=1 if i == j else 2)
        cur = []
        add_into(cur, sq, shift=2)
        # u * ([z^{n-1}] divided difference of M, + 1 at n = 1)
        dd = _poly_divided_difference(polys[n - 1])
        if n == 1:
            dd = [1]
        add_into(cur, dd, shift=1)
        polys.append(cur)
    return polys


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divided_difference(p: list) -> list:
    """(u p(u) - p(1)) / (u - 1) for an integer coefficient list."""
    out = [0] * len(p)
    acc = 0
    for k in range(len(p) - 1, -1, -1):
        acc += p[k]
        out[k] = acc
    return out


def map_degree_series(order: int) -> ExactSeries:
    """M(z,u): z marks edges, u the root-face degree (equivalently root-vertex degree)."""
    ring = SeriesRing.make(("z", "u"), caps={"z": order}, semantics=OGF)
    c = {}
    for n, p in enumerate(root_degree_polynomials(order)):
        for k, v in enumerate(p):
            if v:
                c[(n, k)] = v
    return ExactSeries(ring, c)


def catalytic_equation(order: int) -> S.FunctionalEquation:
    """The root-degree equation as a fixed-point problem for the generic solver."""
    ring = SeriesRing.make(("z", "u"), caps={"z": order}, semantics=OGF)

    def rhs(m: ExactSeries) -> ExactSeries:
        z = m.ring.gen("z")
        u = m.ring.gen("u")
        dd = S.divided_difference(m, "u")
        return z * u * u * (m + 1) ** 2 + u * z * (dd + 1)

    return S.FunctionalEquation(rhs, ring, "z")


def map_series(order: int) -> ExactSeries:
    """M(z) through ``order``; closed form, Tutte's formula and the catalytic recursion must agree."""
    closed = map_series_closed_form(order)
    tutte = map_series_tutte(order)
    catalytic = map_degree_series(order).specialize(u=1)
    if closed != tutte or closed != catalytic:
        raise SelfCheckError("map series routes disagree")
    return closed


# ---------------------------------------------------------------------------
# trees, 2-maps, 3-maps


def planar_tree_series(order: int, name: str = "z") -> ExactSeries:
    """Planar trees by edges: T = 1/(1 - z(1+T)) - 1 (Catalan numbers)."""
    ring = _ring(order, name)

    def rhs(t):
        z = t.ring.gen(name)
        return S.geometric(t.ring, z * (1 + t)) - 1

    return S.solve_fixed_point(S.FunctionalEquation(rhs, ring, name), order)


def two_map_series(order: int, M: ExactSeries | None = None) -> ExactSeries:
    """H(x) = (1-x)/(1+x) * (M(x/(1+x)^2) - x)."""
    M = map_series_closed_form(order) if M is None else M
    ring = _ring(order, "x")
    x = ring.gen("x")
    sub = S.compose(M.rename(z="x"), x / (1 + x) ** 2)
    return (1 - x) / (1 + x) * (sub - x)


def three_map_series(order: int, H: ExactSeries | None = None) -> ExactSeries:
    """K(x) = (H(x/(1+x)) - x)/(1+x)."""
    H = two_map_series(order) if H is None else H
    ring = _ring(order, "x")
    x = ring.gen("x")
    return (S.compose(H, x / (1 + x)) - x) / (1 + x)


def two_map_from_three(K: ExactSeries) -> ExactSeries:
    """H(z) = K(z/(1-z))/(1-z) + z/(1-z): paths substituted for edges."""
    ring = K.ring
    z = ring.gen(ring.variables[0])
    return S.compose(K, z / (1 - z)) / (1 - z) + z / (1 - z)


def map_from_two_map(H: ExactSeries) -> ExactSeries:
    """M(z) = T(z) + H(T(z)) (1+T)/(1-T)."""
    order = H.ring.caps[0]
    T = planar_tree_series(order)
    Hz = H.rename(**{H.ring.variables[0]: "z"})
    return T + S.compose(Hz, T) * (1 + T) / (1 - T)


# ---------------------------------------------------------------------------
# size-marked series


def _bivariate(order: int, first="z", second="u") -> SeriesRing:
    return SeriesRing.make((first, second), caps={first: order}, semantics=OGF)


def core_marked(order: int) -> ExactSeries:
    """M(z,u) = H(u T(z)) (1+T)/(1-T) + T(z); u marks the number of core edges."""
    T = planar_tree_series(order)
    H = two_map_series(order)
    F = (1 + T) / (1 - T)
    ring = _bivariate(order)
    c = {}
    power = T.ring.one()
    for k in range(1, order + 1):
        power = power * T
        hk = H.coefficient(k)
        if hk:
            piece = (power * F).scale(S.as_rational(hk))
            for (n,), v in piece.items():
                c[(n, k)] = v
    for (n,), v in T.items():
        c[(n, 0)] = c.get((n, 0), 0) + v
    return ExactSeries(ring, c)


def kernel_marked_2map(order: int) -> ExactSeries:
    """H(z,u) = K(uz/(1-z))/(1-z) + z/(1-z); u marks kernel edges."""
    K = three_map_series(order).rename(x="y")
    ring = _bivariate(order)
    z, u = ring.gens()
    inner = u * z / (1 - z)
    return S.compose(K, {"y": inner}, target=ring) / (1 - z) + z / (1 - z)


def kernel_in_map(order: int) -> ExactSeries:
    """M(z,u) with u marking the kernel size, via the core decomposition of maps."""
    Hu = kernel_marked_2map(order)
    T = planar_tree_series(order)
    ring = _bivariate(order)
    Tz = T.embed(ring)
    F = (1 + Tz) / (1 - Tz)
    sub = S.compose(Hu, {"z": Tz, "u": ring.gen("u")}, target=ring)
    return sub * F + Tz


def size_distribution(F: ExactSeries, n: int) -> dict:
    """Exact distribution {k: count} of the u-marked parameter at z-size n."""
    out = {}
    for (m, k), v in F.items():
        if m == n:
            out[k] = int(v) if v.denominator == 1 else S.to_fraction(v)
    return dict(sorted(out.items()))


def mean_size(F: ExactSeries, n: int) -> Fraction:
    dist = size_distribution(F, n)
    total = sum(dist.values())
    return Fraction(sum(k * c for k, c in dist.items())) / total


def mean_core_size(n: int, H: ExactSeries | None = None) -> Fraction:
    """Exact E[core size] of a random map with n edges.

    Uses d/du M(z,u) at u=1 = T H'(T) (1+T)/(1-T), which avoids building the
    full bivariate table.
    """
    T = planar_tree_series(n)
    H = two_map_series(n) if H is None else H
    dH = H.derivative("x").rename(x="z")
    F = T * S.compose(dH, T) * (1 + T) / (1 - T)
    return F.coefficient(n) / tutte_count(n)


def tree_size_marked(k: int, order: int) -> ExactSeries:
    """M(z, w) where w marks attached trees with exactly k edges."""
    T = planar_tree_series(order)
    H = two_map_series(order)
    ring = _bivariate(order, "z", "w")
    Tz = T.embed(ring)
    w = ring.gen("w")
    tk = S.as_rational(T.coefficient(k)) if k <= order else mpq(0)
    Tw = Tz + (w - 1) * ring.monomial({"z": k}, tk)
    F = (1 + Tz) / (1 - Tz)
    return S.compose(H.rename(x="z"), {"z": Tw}, target=ring) * F + Tz


# ---------------------------------------------------------------------------
# attached trees


def attached_tree_stats(k: int) -> tuple:
    """(alpha_k, beta_k): limiting number of k-edge trees per edge, and its normalisation."""
    if k < 1:
        raise ValueError("k >= 1")
    with mpmath.workdps(WORK_DPS):
        r6 = mpmath.sqrt(6)
        catalan = mpmath.mpf(math.comb(2 * k, k)) / (k + 1)
        alpha = (4 + mpmath.mpf(5) / 3 * r6) * catalan / mpmath.mpf(12) ** k
        beta = alpha / (r6 / 3)
        return +alpha, +beta


def attached_tree_partial_sum(K: int) -> tuple:
    """(sum_{k<=K} alpha_k, bound on the tail sum_{k>K} alpha_k)."""
    with mpmath.workdps(WORK_DPS):
        total = mpmath.fsum(attached_tree_stats(k)[0] for k in range(1, K + 1))
        # C_k 12^{-k} <= 3^{-k}
        tail = (4 + mpmath.mpf(5) / 3 * mpmath.sqrt(6)) * mpmath.mpf(3) ** (-K) / 2
        return total, tail


# ---------------------------------------------------------------------------
# root-degree series for 2-maps and 3-maps


def two_map_degree(order: int, M: ExactSeries | None = None) -> ExactSeries:
    """H(x,w) from M(z,u) by z = x/(1+x)^2, u = w(1+x)/(1+wx).

    Root in the core, root in an attached tree, or the map is a tree:
    M(z,u) = H(x,w)(1+wx) + wx(1+wx) H(x)/(1-x) + wx, which inverts to
    H(x,w) = M(z,u)/(1+wx) - wx M(x)/(1+x) + wx^2/(1+x) + 1/(1+wx) - 1.
    """
    M = map_degree_series(order) if M is None else M
    ring = SeriesRing.make(("x", "w"), caps={"x": order}, semantics=OGF)
    x, w = ring.gens()
    zsub = x / (1 + x) ** 2
    usub = w * (1 + x) / (1 + w * x)
    Mxw = S.compose(M, {"z": zsub, "u": usub}, target=ring)
    Mx = S.compose(M.specialize(u=1), {"z": zsub}, target=ring)
    return (
        Mxw / (1 + w * x)
        - w * x / (1 + x) * Mx
        + w * x * x / (1 + x)
        + 1 / (1 + w * x)
        - 1
    )


def three_map_degree(order: int, H: ExactSeries | None = None) -> ExactSeries:
    """K(x,u) = H(x/(1+x),u) - x u^2/(1+x) (H(x/(1+x)) + 1)."""
    H = two_map_degree(order) if H is None else H
    ring = SeriesRing.make(("x", "u"), caps={"x": order}, semantics=OGF)
    x, u = ring.gens()
    sub = S.compose(H.rename(w="u"), {"x": x / (1 + x), "u": u}, target=ring)
    H1 = S.compose(H.specialize(w=1), {"x": x / (1 + x)}, target=ring)
    return sub - x * u * u / (1 + x) * H1 - x * u * u / (1 + x)


# ---------------------------------------------------------------------------
# limiting root-degree distributions


@dataclass(frozen=True)
class TailRecord:
    amplitude: mpmath.mpf
    growth: mpmath.mpf
    exponent: Fraction = Fraction(1, 2)


@dataclass(frozen=True)
class DegreeDistribution:
    name: str
    coefficients: list  # exact p(k), k = 0..len-1
    tail: TailRecord
    singularity: mpmath.mpf
    evaluate: Callable = field(repr=False, compare=False)

    def pgf_at_one(self) -> mpmath.mpf:
        return self.evaluate(mpmath.mpf(1))

    def partial_sums(self) -> list:
        out, acc = [], 0
        for c in self.coefficients:
            acc = acc + c
            out.append(acc)
        return out


def p_maps_series(order: int) -> ExactSeries:
    """p_M(u) = u sqrt(3)/sqrt((2+u)(6-5u)^3) = (u/12)(1+u/2)^{-1/2}(1-5u/6)^{-3/2}."""
    ring = _ring(order, "u")
    u = ring.gen("u")
    a = S.binomial_series(ring, "u", mpq(-1, 2), mpq(1, 2))
    b = S.binomial_series(ring, "u", mpq(-3, 2), mpq(-5, 6))
    return (u * a * b).scale(mpq(1, 12))


def p_maps(u):
    u = mpmath.mpmathify(u)
    return u * mpmath.sqrt(3) / mpmath.sqrt((2 + u) * (6 - 5 * u) ** 3)


def p_two_maps(u):
    s = SIGMA.to_mpf()
    u = mpmath.mpmathify(u)
    return (p_maps(u * (1 + s) / (1 + u * s)) * (1 + s) / (1 + u * s) - u * s) / (1 - s)


def p_three_maps(u):
    s = SIGMA.to_mpf()
    u = mpmath.mpmathify(u)
    return (p_two_maps(u) - u * u * s) / (1 - s)


def _sigma_polynomial_series(order: int):
    """p_M(u(1+s)/(1+us)) (1+s)/(1+us) - us as a series in u with polynomial-in-s coefficients."""
    pm = p_maps_series(order)
    ring = SeriesRing.make(("u", "s"), caps={"u": order}, semantics=OGF)
    u, s = ring.gens()
    g = 1 / (1 + u * s)
    inner = u * (1 + s) * g
    return S.compose(pm, {"u": inner}, target=ring) * (1 + s) * g - u * s


def degree_distributions(order: int = 60) -> tuple:
    """(p_M, p_H, p_K) with exact coefficients up to u^order and tail data."""
    pm = p_maps_series(order)
    pm_coeffs = pm.coefficient_list()
    raw = _sigma_polynomial_series(order)
    by_k: dict = {}
    for (k, e), v in raw.items():
        by_k.setdefault(k, {})[e] = S.to_fraction(v)
    one_minus = 1 - SIGMA
    ph = []
    for k in range(order + 1):
        terms = by_k.get(k, {})
        coeffs = [terms.get(e, 0) for e in range(max(terms, default=-1) + 1)]
        ph.append(poly_at(coeffs, SIGMA) / one_minus)
    pk = list(ph)
    pk[2] = pk[2] - SIGMA
    pk = [c / one_minus for c in pk]
    with mpmath.workdps(WORK_DPS):
        s = SIGMA.to_mpf()
        w = mpmath.sqrt(mpmath.mpf(2) / 3)
        nu2 = mpmath.sqrt(3 * (1 - s) / (64 * mpmath.pi))
        nu3 = mpmath.sqrt(3 / (64 * mpmath.pi * (1 - s)))
        nuM = 1 / (4 * mpmath.sqrt(10)) / mpmath.gamma(mpmath.mpf(1.5))
        dm = DegreeDistribution(
            "maps", pm_coeffs, TailRecord(nuM, mpmath.mpf(5) / 6), mpmath.mpf(6) / 5, p_maps
        )
        dh = DegreeDistribution("2-maps", ph, TailRecord(nu2, w), 1 / w, p_two_maps)
        dk = DegreeDistribution("3-maps", pk, TailRecord(nu3, w), 1 / w, p_three_maps)
    return dm, dh, dk


def tail_amplitude_numeric(dist: DegreeDistribution, eps=mpmath.mpf("1e-40")) -> mpmath.mpf:
    """Estimate nu from the singular behaviour p(u) ~ Q (1-u/r)^{-3/2}: nu = Q/Gamma(3/2)."""
    with mpmath.workdps(WORK_DPS + 20):
        r = mpmath.mpf(dist.singularity)
        e1, e2 = mpmath.mpf(eps), mpmath.mpf(eps) / 4
        q1 = dist.evaluate(r * (1 - e1)) * e1 ** mpmath.mpf(1.5)
        q2 = dist.evaluate(r * (1 - e2)) * e2 ** mpmath.mpf(1.5)
        # next correction is O(eps^{1/2}); one Richardson step with ratio 2
        q = 2 * q2 - q1
        return q / mpmath.gamma(mpmath.mpf(1.5))


# ---------------------------------------------------------------------------
# quasi-powers constants


def singularity_functions() -> dict:
    """Closed-form moving singularities rho(u) for the three size parameters."""
    u = sympy.Symbol("u", positive=True)
    s = 5 - 2 * sympy.sqrt(6)
    t = (sympy.sqrt(6) - 2) / 4
    xi = s * u / (s + u) ** 2
    chi = t / (t + u)
    zeta = chi / (1 + chi) ** 2
    return {"core": (u, xi), "kernel_of_2map": (u, chi), "kernel_of_map": (u, zeta)}


def quasi_powers_exact(u, rho) -> tuple:
    """(mean, variance) coefficients, exact sympy expressions."""
    r0 = rho.subs(u, 1)
    r1 = sympy.diff(rho, u).subs(u, 1)
    r2 = sympy.diff(rho, u, 2).subs(u, 1)
    mean = sympy.radsimp(sympy.nsimplify(sympy.simplify(-r1 / r0)))
    var = sympy.radsimp(sympy.simplify(-r2 / r0 - r1 / r0 + (r1 / r0) ** 2))
    return sympy.simplify(mean), sympy.simplify(var)


STATED_FORMS = {
    "core": (sympy.sqrt(6) / 3, sympy.Rational(1, 6)),
    "kernel_of_2map": (2 * sympy.sqrt(6) - 4, 18 * sympy.sqrt(6) - 44),
    "kernel_of_map": (4 - 4 * sympy.sqrt(6) / 3, sympy.Rational(128, 3) - sympy.Rational(52, 3) * sympy.sqrt(6)),
}


def quasi_stats_maps() -> dict:
    """{parameter: (mean, variance)} as exact sympy expressions."""
    return {name: quasi_powers_exact(u, rho) for name, (u, rho) in singularity_functions().items()}
