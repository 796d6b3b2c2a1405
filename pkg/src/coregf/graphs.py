"""Labelled 2-graphs and 3-graphs from a connected-graph series C(x,y).

Everything here is generic over the input class: pass the all-graphs series,
the planar series read off the oracle, or any user-supplied document.  ``x``
marks vertices (exponential), ``y`` edges, ``w`` a root degree, ``u`` a
core size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from . import oracle
from . import series as S
from .series import EGF, OGF, ExactSeries, SeriesRing


class SelfCheckError(RuntimeError):
    """Two independent constructions of the same series disagree."""


ALL_GRAPHS = "all-graphs"
ORACLE_PLANAR = "oracle-planar"
USER = "user-supplied"


def _xy_ring(order: int) -> SeriesRing:
    return SeriesRing.make(("x", "y"), caps={"x": order}, semantics={"x": EGF, "y": OGF})


def _x_ring(order: int) -> SeriesRing:
    return S.univariate_ring("x", order, EGF)


def _xw_ring(order: int, w: str = "w") -> SeriesRing:
    return SeriesRing.make(("x", w), caps={"x": order}, semantics={"x": EGF, w: OGF})


def _xyw_ring(order: int) -> SeriesRing:
    return SeriesRing.make(("x", "y", "w"), caps={"x": order}, semantics={"x": EGF, "y": OGF, "w": OGF})


# ---------------------------------------------------------------------------
# trees


def tree_series(order: int):
    """(T, U, T(x,w)) with T = x e^T, U = T - T^2/2 and T(x,w) = x e^{wT(x)}."""
    ring = _x_ring(order)
    x = ring.gen("x")
    T = S.solve_fixed_point(S.FunctionalEquation(lambda t: t.ring.gen("x") * S.exp(t), ring, "x"), order)
    U = T - T * T / 2
    r2 = _xw_ring(order)
    w = r2.gen("w")
    Tw = r2.gen("x") * S.exp(w * T.embed(r2))
    return T, U, Tw


def bivariate_trees(order: int):
    """T(x,y) = T(xy)/y and U(x,y) = U(xy)/y."""
    T, U, _ = tree_series(order + 1)
    ring = _xy_ring(order)
    out = []
    for F in (T, U):
        c = {}
        for (n,), v in F.items():
            if 1 <= n <= order:
                c[(n, n - 1)] = v
        out.append(ExactSeries(ring, c))
    return tuple(out)


# ---------------------------------------------------------------------------
# input


@dataclass(frozen=True)
class ConnectedInput:
    """C(x,y) and optionally the vertex-rooted refinement C•(x,y,w)."""

    C: ExactSeries
    rooted: ExactSeries | None = None
    provenance: str = USER

    def __post_init__(self):
        if tuple(self.C.variables) != ("x", "y"):
            raise ValueError("C must be a series in (x, y)")
        if self.C.ring.caps[1] is not None:
            raise ValueError("y must be uncapped (C is a polynomial in y at each x-degree)")
        for (n, _), v in self.C.items():
            q = v * math.factorial(n)
            if q.denominator != 1 or q < 0:
                raise ValueError("labelled counts of C must be non-negative integers")
        if self.rooted is not None:
            if tuple(self.rooted.variables) != ("x", "y", "w"):
                raise ValueError("rooted refinement must be a series in (x, y, w)")
            lhs = self.rooted.specialize(w=1)
            rhs = self.C.euler("x").embed(lhs.ring)
            if lhs.embed(rhs.ring) != rhs:
                raise ValueError("rooted refinement does not satisfy C•(x,y,1) = x dC/dx")

    @property
    def order(self) -> int:
        return self.C.ring.caps[0]

    def univariate(self) -> ExactSeries:
        return self.C.specialize(y=1)

    def require_rooted(self) -> ExactSeries:
        if self.rooted is None:
            raise ValueError("this pipeline needs the rooted refinement C•(x,y,w)")
        return self.rooted


def all_graphs_series(order: int) -> tuple:
    """(G, G•) for all labelled graphs: sum (1+y)^{C(n,2)} x^n/n!, and rooted by root degree."""
    ring = _xyw_ring(order)
    y = ring.gen("y")
    w = ring.gen("w")
    one_y = 1 + y
    one_wy = 1 + w * y
    G = ring.zero()
    Gr = ring.zero()
    for n in range(order + 1):
        xn = ring.monomial({"x": n}, Fraction(1, math.factorial(n)))
        G = G + xn * one_y ** (n * (n - 1) // 2)
        if n:
            Gr = Gr + (xn * one_wy ** (n - 1) * one_y ** ((n - 1) * (n - 2) // 2)).scale(n)
    return G, Gr


def all_connected_series(order: int) -> ConnectedInput:
    """Connected labelled graphs: C = log G, C• = G•/G."""
    G, Gr = all_graphs_series(order)
    C = S.log(G.specialize(w=0).embed(_xy_ring(order)))
    rooted = Gr / G
    return ConnectedInput(C, rooted, ALL_GRAPHS)


def oracle_planar_series(order: int, workers: int | None = None) -> ConnectedInput:
    """Connected planar graphs read off the exhaustive sweep (order <= 7)."""
    C = oracle.connected_series(order, planar=True, workers=workers)
    rooted = oracle.rooted_connected_series(order, planar=True, workers=workers)
    return ConnectedInput(C, rooted, ORACLE_PLANAR)


def load_connected_input(text: str, rooted_text: str | None = None) -> ConnectedInput:
    C = S.loads(text)
    rooted = S.loads(rooted_text) if rooted_text else None
    return ConnectedInput(C, rooted, USER)


# ---------------------------------------------------------------------------
# 2-graphs


def two_graph_series(C: ConnectedInput, order: int | None = None, bivariate: bool = False) -> ExactSeries:
    """H(x) = C(x e^{-x}) - x + x^2/2, or H(x,y) = C(x e^{-xy}, y) - x + x^2 y/2."""
    order = C.order if order is None else min(order, C.order)
    if bivariate:
        ring = _xy_ring(order)
        x, y = ring.gens()
        return S.compose(C.C, {"x": x * S.exp(-x * y), "y": y}, target=ring) - x + x * x * y / 2
    ring = _x_ring(order)
    x = ring.gen("x")
    return S.compose(C.univariate(), x * S.exp(-x)) - x + x * x / 2


def connected_from_two_graphs(H: ExactSeries) -> ExactSeries:
    """C(x,y) = H(T(x,y), y) + U(x,y): the inverse direction of the core equation."""
    order = H.ring.caps[0]
    T, U = bivariate_trees(order)
    return S.compose(H, {"x": T, "y": T.ring.gen("y")}, target=T.ring) + U


def core_marked_graphs(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """C(x,u) = H(u T(x)) + U(x); u marks the number of core vertices."""
    order = C.order if order is None else min(order, C.order)
    H = two_graph_series(C, order)
    T, U, _ = tree_series(order)
    ring = _xw_ring(order, "u")
    uT = ring.gen("u") * T.embed(ring)
    return S.compose(H, {"x": uT}, target=ring) + U.embed(ring)


def tree_size_marked(C: ConnectedInput, k: int, order: int | None = None) -> ExactSeries:
    """C(x, w_k) = H(T(x) + (w_k - 1) T_k x^k) + U(x); w marks attached trees with k vertices."""
    order = C.order if order is None else min(order, C.order)
    H = two_graph_series(C, order)
    T, U, _ = tree_series(order)
    ring = _xw_ring(order)
    w = ring.gen("w")
    Tk = T.coefficient(k) if k <= order else 0
    Tw = T.embed(ring) + (w - 1) * ring.monomial({"x": k}, Tk)
    return S.compose(H, {"x": Tw}, target=ring) + U.embed(ring)


# ---------------------------------------------------------------------------
# weighted multigraphs


def multigraph_ring(order: int) -> SeriesRing:
    """x, z, y1..yM with M = order + 1 and weights x:1, z:1, y_i:i-1 capped at ``order``.

    Along the kernel chain every image of y_i has x-valuation >= i-1 and the
    images of x and z have x-valuation >= 1, so this weighted cap loses
    nothing below x^{order+1}; compose audits that when it is used.
    """
    M = order + 1
    names = ("x", "z") + tuple(f"y{i}" for i in range(1, M + 1))
    weights = {"x": 1, "z": 1}
    weights.update({f"y{i}": i - 1 for i in range(1, M + 1)})
    sem = {n: OGF for n in names}
    sem["x"] = EGF
    return SeriesRing.make(names, caps={"x": order}, semantics=sem, weights=weights, total_cap=order)


def multiplicity_cap(ring: SeriesRing) -> int:
    return len(ring.variables) - 2


def multigraph_lift(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """C~(x,z,y1,...) = C(x e^{z/2}, sum_i y_i/i!)."""
    order = C.order if order is None else min(order, C.order)
    ring = multigraph_ring(order)
    x, z = ring.gen("x"), ring.gen("z")
    ysum = ring.zero()
    for i in range(1, multiplicity_cap(ring) + 1):
        ysum = ysum + ring.gen(f"y{i}").scale(mpq(1, math.factorial(i)))
    Cx = C.C.embed(C.C.ring.with_caps(x=order))
    return S.compose(Cx, {"x": x * S.exp(z / 2), "y": ysum}, target=ring)


def multigraph_core(Ct: ExactSeries) -> ExactSeries:
    """H~ = C~(x e^{-x y1}, z, y1, ...) - x + x^2 y1/2."""
    ring = Ct.ring
    x, y1 = ring.gen("x"), ring.gen("y1")
    return S.compose(Ct, {"x": x * S.exp(-x * y1)}, target=ring) - x + x * x * y1 / 2


def _path_parameter(ring: SeriesRing, y1: ExactSeries) -> ExactSeries:
    x = ring.gen("x")
    return -x * y1 * y1 / (1 + x * y1)


def _kernel_images(ring: SeriesRing, target: SeriesRing, y: dict, z: ExactSeries, x: ExactSeries,
                   s: ExactSeries, shift_x: bool) -> dict:
    """Images of x, z, y_k under the path substitution; y maps k -> y_k in ``target`` (y_0 = 1)."""
    M = multiplicity_cap(ring)
    imgs = {}
    if shift_x:
        imgs["x"] = x * S.exp(-x * (y[1] + s))
    imgs["z"] = -s * x * y[1] - x * y.get(2, target.zero()) + z
    for k in range(1, M + 1):
        acc = target.zero()
        spow = target.one()
        for j in range(k, -1, -1):
            yj = y.get(j, target.zero()) if j else target.one()
            if yj:
                acc = acc + (yj * spow).scale(math.comb(k, j))
            spow = spow * s
        imgs[f"y{k}"] = acc
    return imgs


def E_series(ring: SeriesRing, x: ExactSeries, y: ExactSeries) -> ExactSeries:
    """E(x,y) = -x + x^2 y/(2+2xy) - log sqrt(1+xy) + xy/2 - (xy)^2/4."""
    xy = x * y
    return -x + x * x * y / (2 + 2 * xy) - S.log(1 + xy) / 2 + xy / 2 - xy * xy / 4


def multigraph_kernel(Ct: ExactSeries) -> ExactSeries:
    """K~(x,z,y1,...) by the path substitution applied directly to C~.

    Besides E(x, y1) the loop and 2-edge corrections -xz/2 + x^2 y2/4 of the
    core-to-kernel step are needed; without them a single vertex with one
    loop and a doubled edge between two vertices would survive.
    """
    ring = Ct.ring
    x, z = ring.gen("x"), ring.gen("z")
    M = multiplicity_cap(ring)
    y = {k: ring.gen(f"y{k}") for k in range(1, M + 1)}
    s = _path_parameter(ring, y[1])
    imgs = _kernel_images(ring, ring, y, z, x, s, shift_x=True)
    corr = -x * z / 2 + x * x * y[2] / 4
    return S.compose(Ct, imgs, target=ring) + E_series(ring, x, y[1]) + corr


def multigraph_kernel_from_core(Ht: ExactSeries) -> ExactSeries:
    """K~ from H~ by the path substitution without the tree step."""
    ring = Ht.ring
    x, z = ring.gen("x"), ring.gen("z")
    M = multiplicity_cap(ring)
    y = {k: ring.gen(f"y{k}") for k in range(1, M + 1)}
    s = _path_parameter(ring, y[1])
    imgs = _kernel_images(ring, ring, y, z, x, s, shift_x=False)
    xy = x * y[1]
    corr = -S.log(1 + xy) / 2 - x * z / 2 + x * x * y[2] / 4 + xy / 2 - xy * xy / 4
    return S.compose(Ht, imgs, target=ring) + corr


def simple_specialization(F: ExactSeries) -> ExactSeries:
    """Set z = 0, y1 = y, y_i = 0 (i >= 2) to read off simple graphs."""
    order = F.ring.caps[0]
    zeros = {v: 0 for v in F.ring.variables if v not in ("x", "y1")}
    G = F.specialize(**zeros).rename(y1="y")
    return ExactSeries(_xy_ring(order), dict(G.items()))


def kernel_series_closed(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """K(x,y) = C(A, B) + E with A = x e^{(x^2y^3-2xy)/(2+2xy)}, B = (1+y) e^{-xy^2/(1+xy)} - 1."""
    order = C.order if order is None else min(order, C.order)
    ring = _xy_ring(order)
    x, y = ring.gens()
    A = x * S.exp((x * x * y ** 3 - 2 * x * y) / (2 + 2 * x * y))
    B = (1 + y) * S.exp(-x * y * y / (1 + x * y)) - 1
    return S.compose(C.C, {"x": A, "y": B}, target=ring) + E_series(ring, x, y)


def kernel_series_chain(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """K(x,y) = K~(x,0,y,0,...) with K~ from the multigraph substitution chain.

    The lift C~ is built in full, then the path substitution is applied with
    the simple specialization z = 0, y1 = y, y_i = 0 already made in the images.
    """
    order = C.order if order is None else min(order, C.order)
    Ct = multigraph_lift(C, order)
    mring = Ct.ring
    ring = _xy_ring(order)
    x, yv = ring.gens()
    y = {1: yv}
    s = -x * yv * yv / (1 + x * yv)
    imgs = _kernel_images(mring, ring, y, ring.zero(), x, s, shift_x=True)
    return S.compose(Ct, imgs, target=ring) + E_series(ring, x, yv)


def kernel_series(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """Simple 3-graphs; the closed form and the multigraph chain must agree exactly."""
    a = kernel_series_closed(C, order)
    b = kernel_series_chain(C, order)
    if a != b:
        raise SelfCheckError("kernel routes disagree")
    return a


# ---------------------------------------------------------------------------
# rooted, by root degree


def rooted_two_graph_degree(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """H•(x,w) = e^{x(1-w)} C•(x e^{-x}, w) - x w C•(x e^{-x}) - x + x^2 w."""
    Cr = C.require_rooted()
    order = C.order if order is None else min(order, C.order)
    Cxw = Cr.specialize(y=1)
    Cxw = Cxw.embed(Cxw.ring.with_caps(x=order))
    ring = _xw_ring(order)
    x, w = ring.gens()
    sub = x * S.exp(-x)
    first = S.exp(x * (1 - w)) * S.compose(Cxw, {"x": sub, "w": w}, target=ring)
    second = x * w * S.compose(Cxw.specialize(w=1), {"x": sub}, target=ring)
    return first - second - x + x * x * w


def kernel_degree_factors(order: int) -> tuple:
    """(B0, B1, B2, B3) of the rooted kernel-degree equation."""
    ring = _xw_ring(order)
    x, w = ring.gens()
    t = x / (1 + x)
    B0 = S.exp((w * w - 1) * x * x / (2 + 2 * x) + x * (1 - w) / (1 + x))
    B1 = x * S.exp((x * x - 2 * x) / (2 + 2 * x))
    B2 = 2 * S.exp(-t) - 1
    B3 = ((1 + w) * S.exp(-w * t) - 1) / B2
    return B0, B1, B2, B3


def rooted_kernel_degree(C: ConnectedInput, order: int | None = None) -> ExactSeries:
    """K•(x,w) = B0 C•(B1, B2, B3) + A0 + A1 w + A2 w^2.

    The A-terms are fixed coefficientwise: a 3-graph has no vertex of degree
    0, 1 or 2, so they cancel every w^0, w^1, w^2 coefficient of the first term.
    """
    Cr = C.require_rooted()
    order = C.order if order is None else min(order, C.order)
    B0, B1, B2, B3 = kernel_degree_factors(order)
    ring = B0.ring
    Crx = Cr.embed(Cr.ring.with_caps(x=order))
    main = B0 * S.compose(Crx, {"x": B1, "y": B2, "w": B3}, target=ring)
    keep = {k: v for k, v in main.items() if k[1] >= 3}
    K = ExactSeries(ring, keep)
    # w=1 marginal must be x dK/dx of the unrooted series
    Kx = kernel_series_closed(C, order).specialize(y=1)
    if K.specialize(w=1) != Kx.euler("x"):
        raise SelfCheckError("rooted kernel series fails the rooting identity; correction infeasible")
    return K


# ---------------------------------------------------------------------------
# helpers


def labelled_counts(F: ExactSeries, upto: int | None = None) -> list:
    """[n! [x^n] F] for a univariate EGF."""
    upto = F.ring.caps[0] if upto is None else upto
    return [F.labelled_count(n) for n in range(upto + 1)]


def labelled_table(F: ExactSeries, n: int) -> dict:
    """{second exponent: n! [x^n ...] F} for a bivariate series in x and one more variable."""
    out = {}
    for (m, k), v in F.items():
        if m == n:
            q = S.to_fraction(v) * math.factorial(n)
            out[k] = int(q) if q.denominator == 1 else q
    return dict(sorted(out.items()))
