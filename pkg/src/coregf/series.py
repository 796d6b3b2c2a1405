"""Exact truncated power series over the rationals.

Coefficients are stored sparsely, keyed by exponent vectors, as ``gmpy2.mpq``
values.  Every series belongs to a :class:`SeriesRing` that fixes the ordered
variable names, the EGF/OGF tag of each variable and the truncation rule:

* a per-variable cap (``None`` means the variable is never truncated, which
  is only sound for series that are genuinely polynomial in it), and
* an optional weighted total-degree cap, ``sum(w_v * e_v) <= total_cap``.

Both rules are closed under multiplication, so every ring operation is exact
for all monomials the ring admits.
"""

from __future__ import annotations

import json
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq

Rational = mpq

EGF = "egf"
OGF = "ogf"


class SeriesError(ValueError):
    """Raised on invalid series operations (bad constant term, semantics clash...)."""


class TruncationError(SeriesError):
    """Raised when a coefficient outside the truncation is requested."""


class IntegralityError(SeriesError):
    """Raised when a labelled count is not an integer."""


class ContractionError(SeriesError):
    """Raised when a fixed-point iteration fails to stabilise."""


def as_rational(value) -> mpq:
    """Convert ints, Fractions, ``"p/q"`` strings and mpq values to ``mpq``."""
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise SeriesError("floats are not exact; pass a Fraction or a 'p/q' string")
    return mpq(value)


def to_fraction(q) -> Fraction:
    q = mpq(q)
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class SeriesRing:
    """Parent object describing variables, semantics and truncation."""

    variables: tuple
    caps: tuple
    semantics: tuple
    weights: tuple | None = None
    total_cap: int | None = None

    def __post_init__(self):
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise SeriesError(f"duplicate variable names in {self.variables}")
        if len(self.caps) != n or len(self.semantics) != n:
            raise SeriesError("caps and semantics must match the variables")
        for s in self.semantics:
            if s not in (EGF, OGF):
                raise SeriesError(f"unknown semantics tag {s!r}")
        for c in self.caps:
            if c is not None and c < 0:
                raise SeriesError("caps must be non-negative")
        if (self.weights is None) != (self.total_cap is None):
            raise SeriesError("weights and total_cap go together")
        if self.weights is not None and len(self.weights) != n:
            raise SeriesError("one weight per variable")

    @classmethod
    def make(cls, variables, caps=None, semantics=None, weights=None, total_cap=None):
        """Build a ring from name-keyed mappings.

        ``caps`` and ``semantics`` may be a single value applied to every
        variable or a mapping; missing names default to uncapped / OGF.
        """
        variables = tuple(variables)
        caps = _spread(caps, variables, None)
        semantics = _spread(semantics, variables, OGF)
        if weights is not None:
            weights = _spread(weights, variables, 0)
        return cls(variables, caps, semantics, weights, total_cap)

    # -- introspection ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise SeriesError(f"variable {name!r} not in ring {self.variables}") from None

    def cap(self, name: str):
        return self.caps[self.index(name)]

    def admits(self, key) -> bool:
        for e, c in zip(key, self.caps):
            if c is not None and e > c:
                return False
        if self.weights is not None:
            if sum(w * e for w, e in zip(self.weights, key)) > self.total_cap:
                return False
        return True

    def weighted_degree(self, key) -> int:
        if self.weights is None:
            return 0
        return sum(w * e for w, e in zip(self.weights, key))

    def is_small(self, key) -> bool:
        """True if powers of this monomial eventually leave the truncation."""
        for e, c in zip(key, self.caps):
            if e > 0 and c is not None:
                return True
        return self.weights is not None and self.weighted_degree(key) > 0

    # -- derived rings ---------------------------------------------------

    def with_caps(self, **caps) -> "SeriesRing":
        new = list(self.caps)
        for name, c in caps.items():
            new[self.index(name)] = c
        return SeriesRing(self.variables, tuple(new), self.semantics, self.weights, self.total_cap)

    def with_total_cap(self, total_cap: int) -> "SeriesRing":
        return SeriesRing(self.variables, self.caps, self.semantics, self.weights, total_cap)

    def without(self, *names) -> "SeriesRing":
        keep = [i for i, v in enumerate(self.variables) if v not in names]
        return SeriesRing(
            tuple(self.variables[i] for i in keep),
            tuple(self.caps[i] for i in keep),
            tuple(self.semantics[i] for i in keep),
            None if self.weights is None else tuple(self.weights[i] for i in keep),
            self.total_cap,
        )

    def unify(self, other: "SeriesRing") -> "SeriesRing":
        """Smallest common ring: union of variables, minimum of caps."""
        if other == self:
            return self
        names = list(self.variables) + [v for v in other.variables if v not in self.variables]
        caps, sem, wts = [], [], []
        for v in names:
            c1 = self.caps[self.variables.index(v)] if v in self.variables else None
            c2 = other.caps[other.variables.index(v)] if v in other.variables else None
            caps.append(c1 if c2 is None else c2 if c1 is None else min(c1, c2))
            s1 = self.semantics[self.variables.index(v)] if v in self.variables else None
            s2 = other.semantics[other.variables.index(v)] if v in other.variables else None
            if s1 is not None and s2 is not None and s1 != s2:
                raise SeriesError(f"variable {v!r} is {s1} in one series and {s2} in the other")
            sem.append(s1 or s2)
            w1 = self.weights[self.variables.index(v)] if self.weights and v in self.variables else None
            w2 = other.weights[other.variables.index(v)] if other.weights and v in other.variables else None
            if w1 is not None and w2 is not None and w1 != w2:
                raise SeriesError(f"conflicting weights for {v!r}")
            wts.append(w1 if w1 is not None else (w2 or 0))
        if self.total_cap is None and other.total_cap is None:
            weights, total = None, None
        else:
            weights = tuple(wts)
            caps_t = [c for c in (self.total_cap, other.total_cap) if c is not None]
            total = min(caps_t)
        return SeriesRing(tuple(names), tuple(caps), tuple(sem), weights, total)

    # -- element construction --------------------------------------------

    def __call__(self, coeffs=None) -> "ExactSeries":
        return ExactSeries(self, coeffs or {})

    def zero(self) -> "ExactSeries":
        return ExactSeries(self, {})

    def one(self) -> "ExactSeries":
        return self.constant(1)

    def constant(self, c) -> "ExactSeries":
        return ExactSeries(self, {(0,) * self.nvars: as_rational(c)})

    def gen(self, name: str) -> "ExactSeries":
        i = self.index(name)
        key = tuple(1 if j == i else 0 for j in range(self.nvars))
        return ExactSeries(self, {key: mpq(1)})

    def gens(self):
        return tuple(self.gen(v) for v in self.variables)

    def monomial(self, exponents: Mapping[str, int], coeff=1) -> "ExactSeries":
        key = [0] * self.nvars
        for name, e in exponents.items():
            key[self.index(name)] = e
        return ExactSeries(self, {tuple(key): as_rational(coeff)})

    def polynomial(self, terms: Mapping[tuple, object]) -> "ExactSeries":
        return ExactSeries(self, {tuple(k): as_rational(v) for k, v in terms.items()})


def _spread(value, names, default):
    if isinstance(value, Mapping):
        return tuple(value.get(n, default) for n in names)
    if value is None:
        return tuple(default for _ in names)
    return tuple(value for _ in names)


def univariate_ring(name="x", cap=10, semantics=OGF) -> SeriesRing:
    return SeriesRing((name,), (cap,), (semantics,))


class ExactSeries:
    """Immutable truncated power series with exact rational coefficients."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring: SeriesRing, coeffs: Mapping):
        self.ring = ring
        c = {}
        for k, v in coeffs.items():
            if v and ring.admits(k):
                c[k] = v if type(v) is type(mpq()) else as_rational(v)
        self._c = c

    @classmethod
    def _raw(cls, ring, c):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._c = c
        return obj

    # -- basic views -----------------------------------------------------

    @property
    def variables(self):
        return self.ring.variables

    @property
    def semantics(self):
        return dict(zip(self.ring.variables, self.ring.semantics))

    @property
    def truncation(self):
        out = {"caps": dict(zip(self.ring.variables, self.ring.caps))}
        if self.ring.weights is not None:
            out["weights"] = dict(zip(self.ring.variables, self.ring.weights))
            out["total_cap"] = self.ring.total_cap
        return out

    def items(self):
        return self._c.items()

    def terms(self):
        """Sorted (exponent tuple, Fraction) pairs."""
        return [(k, to_fraction(v)) for k, v in sorted(self._c.items())]

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def constant_term(self) -> mpq:
        return self._c.get((0,) * self.ring.nvars, mpq(0))

    def __repr__(self):
        if not self._c:
            return f"ExactSeries(0; {','.join(self.variables)})"
        parts = []
        for k, v in sorted(self._c.items(), key=lambda kv: (sum(kv[0]), kv[0]))[:12]:
            mono = "*".join(
                f"{n}^{e}" if e > 1 else n for n, e in zip(self.variables, k) if e
            )
            parts.append(f"{v}*{mono}" if mono else str(v))
        more = " + ..." if len(self._c) > 12 else ""
        return "ExactSeries(" + " + ".join(parts) + more + ")"

    # -- coefficient access ----------------------------------------------

    def _key(self, exponents) -> tuple:
        if isinstance(exponents, Mapping):
            key = [0] * self.ring.nvars
            for name, e in exponents.items():
                key[self.ring.index(name)] = e
            return tuple(key)
        if isinstance(exponents, int):
            exponents = (exponents,)
        key = tuple(exponents)
        if len(key) != self.ring.nvars:
            raise SeriesError(f"expected {self.ring.nvars} exponents, got {len(key)}")
        return key

    def coefficient(self, exponents) -> Fraction:
        """Exact coefficient; raises :class:`TruncationError` outside the caps."""
        key = self._key(exponents)
        if any(e < 0 for e in key) or not self.ring.admits(key):
            raise TruncationError(f"exponents {key} lie outside the truncation")
        return to_fraction(self._c.get(key, 0))

    def labelled_count(self, exponents) -> int:
        """Coefficient times ``prod(e!)`` over EGF variables; must be an integer."""
        key = self._key(exponents)
        c = as_rational(self.coefficient(key))
        for e, s in zip(key, self.ring.semantics):
            if s == EGF:
                c *= math.factorial(e)
        if c.denominator != 1:
            raise IntegralityError(f"labelled count {c} at {key} is not an integer")
        return int(c.numerator)

    def coefficient_list(self, name: str | None = None, upto: int | None = None) -> list:
        """Univariate coefficient list (Fractions) for a one-variable series."""
        if self.ring.nvars != 1:
            raise SeriesError("coefficient_list needs a univariate series")
        cap = self.ring.caps[0] if upto is None else upto
        return [to_fraction(self._c.get((i,), 0)) for i in range(cap + 1)]

    def slice(self, name: str, k: int) -> "ExactSeries":
        """Coefficient of ``name**k`` as a series in the remaining variables."""
        i = self.ring.index(name)
        ring = self.ring.without(name)
        c = {key[:i] + key[i + 1:]: v for key, v in self._c.items() if key[i] == k}
        return ExactSeries._raw(ring, c)

    def degree(self, name: str) -> int:
        i = self.ring.index(name)
        return max((k[i] for k in self._c), default=-1)

    def valuation(self, name: str | None = None) -> int:
        """Lowest degree in ``name`` (total degree if omitted); -1 for zero."""
        if not self._c:
            return -1
        if name is None:
            return min(sum(k) for k in self._c)
        i = self.ring.index(name)
        return min(k[i] for k in self._c)

    # -- ring moves ------------------------------------------------------

    def embed(self, ring: SeriesRing) -> "ExactSeries":
        """Re-express in a ring whose variables include ours."""
        if ring == self.ring:
            return self
        pos = []
        for v in self.ring.variables:
            if v not in ring.variables:
                if any(k[self.ring.index(v)] for k in self._c):
                    raise SeriesError(f"cannot drop variable {v!r} that the series uses")
                pos.append(None)
            else:
                pos.append(ring.index(v))
        n = ring.nvars
        c = {}
        for k, val in self._c.items():
            new = [0] * n
            for p, e in zip(pos, k):
                if p is not None:
                    new[p] = e
            new = tuple(new)
            if ring.admits(new):
                c[new] = val
        return ExactSeries._raw(ring, c)

    def truncate(self, **caps) -> "ExactSeries":
        return self.embed(self.ring.with_caps(**caps))

    def _coerce(self, other):
        if isinstance(other, ExactSeries):
            if other.ring == self.ring:
                return self, other
            ring = self.ring.unify(other.ring)
            return self.embed(ring), other.embed(ring)
        return self, self.ring.constant(other)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        c = dict(a._c)
        for k, v in b._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return ExactSeries._raw(a.ring, c)

    __radd__ = __add__

    def __neg__(self):
        return ExactSeries._raw(self.ring, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExactSeries) else -as_rational(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "ExactSeries":
        c = as_rational(c)
        if not c:
            return self.ring.zero()
        return ExactSeries._raw(self.ring, {k: v * c for k, v in self._c.items()})

    def __mul__(self, other):
        if not isinstance(other, ExactSeries):
            return self.scale(other)
        a, b = self._coerce(other)
        return ExactSeries._raw(a.ring, _mul(a.ring, a._c, b._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ExactSeries):
            return self.scale(1 / as_rational(other))
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise SeriesError("use power() for non-integer exponents")
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, ExactSeries):
            a, b = self._coerce(other)
            return a._c == b._c
        return self._c == self.ring.constant(other)._c

    def __hash__(self):
        return hash((self.ring, frozenset(self._c.items())))

    # -- analytic helpers ------------------------------------------------

    def _split_constant(self):
        zero = (0,) * self.ring.nvars
        c0 = self._c.get(zero, mpq(0))
        rest = {k: v for k, v in self._c.items() if k != zero}
        for k in rest:
            if not self.ring.is_small(k):
                raise SeriesError(
                    f"monomial {k} of the non-constant part does not vanish under the truncation"
                )
        return c0, ExactSeries._raw(self.ring, rest)

    def inverse(self) -> "ExactSeries":
        c0, g = self._split_constant()
        if not c0:
            raise SeriesError("series with zero constant term is not invertible")
        if self.ring.nvars == 1:
            return _dense_out(self.ring, _dense_pow(_dense_in(self), -1, c0))
        h = g.scale(1 / c0)
        return _sum_powers(h, lambda k: mpq((-1) ** k)).scale(1 / c0)

    def derivative(self, name: str) -> "ExactSeries":
        i = self.ring.index(name)
        c = {}
        for k, v in self._c.items():
            if k[i]:
                nk = k[:i] + (k[i] - 1,) + k[i + 1:]
                c[nk] = v * k[i]
        return ExactSeries(self.ring, c)

    def euler(self, name: str) -> "ExactSeries":
        """``name * d/dname``: multiplies each coefficient by its exponent."""
        i = self.ring.index(name)
        return ExactSeries._raw(self.ring, {k: v * k[i] for k, v in self._c.items() if k[i]})

    def specialize(self, **values) -> "ExactSeries":
        """Set variables to rational constants and drop them from the ring.

        Setting a capped variable to a nonzero value would silently discard
        truncated terms, so that is refused; zero is always allowed.
        """
        idx = {}
        for name, val in values.items():
            i = self.ring.index(name)
            val = as_rational(val)
            if val and self.ring.caps[i] is not None:
                raise SeriesError(f"cannot set capped variable {name!r} to a nonzero value")
            idx[i] = val
        ring = self.ring.without(*values)
        keep = [i for i in range(self.ring.nvars) if i not in idx]
        c = {}
        for k, v in self._c.items():
            coeff = v
            for i, val in idx.items():
                if k[i]:
                    coeff = coeff * val ** k[i]
            if coeff:
                nk = tuple(k[i] for i in keep)
                s = c.get(nk, 0) + coeff
                if s:
                    c[nk] = s
                else:
                    c.pop(nk, None)
        return ExactSeries(ring, c)

    def rename(self, **names) -> "ExactSeries":
        vars_ = tuple(names.get(v, v) for v in self.ring.variables)
        ring = SeriesRing(vars_, self.ring.caps, self.ring.semantics, self.ring.weights, self.ring.total_cap)
        return ExactSeries._raw(ring, dict(self._c))

    # -- serialisation ---------------------------------------------------

    def to_document(self) -> dict:
        return to_document(self)

    def to_json(self) -> str:
        return dumps(self)


# ---------------------------------------------------------------------------
# multiplication kernels


def _mul(ring: SeriesRing, a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if ring.nvars == 1 and ring.caps[0] is not None:
        return _mul_dense1(ring.caps[0], a, b)
    if len(a) < len(b):
        a, b = b, a
    capped = [(i, c) for i, c in enumerate(ring.caps) if c is not None]
    weights = ring.weights
    total = ring.total_cap
    if weights is not None:
        def grade(k):
            return sum(w * e for w, e in zip(weights, k))
        limit = total
        extra = capped
    elif capped:
        p, limit = capped[0]
        def grade(k):
            return k[p]
        extra = capped[1:]
    else:
        def grade(k):
            return 0
        limit = 0
        extra = []
    bl = sorted(((grade(k), k, v) for k, v in b.items()), key=operator.itemgetter(0))
    out: dict = {}
    add = operator.add
    for ka, va in a.items():
        ga = grade(ka)
        room = limit - ga
        if room < 0:
            continue
        for gb, kb, vb in bl:
            if gb > room:
                break
            k = tuple(map(add, ka, kb))
            ok = True
            for i, c in extra:
                if k[i] > c:
                    ok = False
                    break
            if ok:
                prev = out.get(k)
                out[k] = va * vb if prev is None else prev + va * vb
    return {k: v for k, v in out.items() if v}


def _mul_dense1(cap: int, a: dict, b: dict) -> dict:
    da = _to_dense(a, cap)
    db = _to_dense(b, cap)
    out = [mpq(0)] * (cap + 1)
    nza = [(i, v) for i, v in enumerate(da) if v]
    nzb = [(j, v) for j, v in enumerate(db) if v]
    for i, va in nza:
        room = cap - i
        for j, vb in nzb:
            if j > room:
                break
            out[i + j] += va * vb
    return {(i,): v for i, v in enumerate(out) if v}


def _to_dense(d: dict, cap: int) -> list:
    out = [mpq(0)] * (cap + 1)
    for (i,), v in d.items():
        if i <= cap:
            out[i] = v
    return out


def _dense_in(f: ExactSeries) -> list:
    return _to_dense(f._c, f.ring.caps[0])


def _dense_out(ring, lst) -> ExactSeries:
    return ExactSeries._raw(ring, {(i,): v for i, v in enumerate(lst) if v})


def _dense_pow(f: list, r, c0=None) -> list:
    """``f**r`` for a dense univariate list with f[0] != 0 (J.C.P. Miller)."""
    n = len(f) - 1
    c0 = f[0] if c0 is None else c0
    r = as_rational(r)
    h0 = _rational_power(c0, r)
    h = [mpq(0)] * (n + 1)
    h[0] = h0
    for m in range(1, n + 1):
        s = mpq(0)
        for k in range(1, m + 1):
            if f[k]:
                s += ((r + 1) * k - m) * f[k] * h[m - k]
        h[m] = s / (m * c0)
    return h


def _rational_power(c, r) -> mpq:
    c = mpq(c)
    r = mpq(r)
    if r.denominator == 1:
        return c ** int(r)
    if c == 1:
        return mpq(1)
    q = int(r.denominator)
    num, den = int(c.numerator), int(c.denominator)
    rn = _iroot(num, q) if num >= 0 else None
    rd = _iroot(den, q)
    if rn is None or rd is None:
        raise SeriesError(f"constant term {c} has no rational power {r}")
    return mpq(rn, rd) ** int(r.numerator)


def _iroot(n: int, q: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / q)) if n < 2 ** 1000 else int(math.isqrt(n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** q == n:
            return cand
    return None


def _sum_powers(g: ExactSeries, coeff: Callable[[int], mpq], start: int = 0) -> ExactSeries:
    """``sum_k coeff(k) g**k``; g must be topologically nilpotent."""
    result = g.ring.zero()
    power = g.ring.one()
    k = 0
    while True:
        if k >= start:
            c = coeff(k)
            if c:
                result = result + power.scale(c)
        power = power * g
        k += 1
        if power.is_zero():
            return result


# ---------------------------------------------------------------------------
# elementary functions


def exp(f: ExactSeries) -> ExactSeries:
    """Exponential of a series with zero constant term."""
    c0, g = f._split_constant()
    if c0:
        raise SeriesError("exp needs a zero constant term")
    if f.ring.nvars == 1:
        gd = _dense_in(f)
        n = len(gd) - 1
        h = [mpq(0)] * (n + 1)
        h[0] = mpq(1)
        for m in range(1, n + 1):
            s = mpq(0)
            for k in range(1, m + 1):
                if gd[k]:
                    s += k * gd[k] * h[m - k]
            h[m] = s / m
        return _dense_out(f.ring, h)
    facts = {}

    def coeff(k):
        if k not in facts:
            facts[k] = mpq(1, math.factorial(k))
        return facts[k]

    return _sum_powers(g, coeff)


def log(f: ExactSeries) -> ExactSeries:
    """Logarithm of a series with constant term 1."""
    c0, g = f._split_constant()
    if c0 != 1:
        raise SeriesError("log needs constant term 1")
    if f.ring.nvars == 1:
        fd = _dense_in(f)
        n = len(fd) - 1
        h = [mpq(0)] * (n + 1)
        for m in range(1, n + 1):
            s = m * fd[m]
            for k in range(1, m):
                if fd[m - k]:
                    s -= k * h[k] * fd[m - k]
            h[m] = s / m
        return _dense_out(f.ring, h)
    return _sum_powers(g, lambda k: mpq((-1) ** (k + 1), k) if k else mpq(0), start=1)


def power(f: ExactSeries, r) -> ExactSeries:
    """``f**r`` for rational r; non-integer r needs a constant term with a rational r-th power."""
    r = as_rational(r)
    if r.denominator == 1:
        return f ** int(r)
    c0, g = f._split_constant()
    if not c0:
        raise SeriesError("non-integer power needs a nonzero constant term")
    if f.ring.nvars == 1:
        return _dense_out(f.ring, _dense_pow(_dense_in(f), r, c0))
    h = g.scale(1 / c0)
    coeffs = {}

    def coeff(k):
        if k not in coeffs:
            coeffs[k] = _binom(r, k)
        return coeffs[k]

    return _sum_powers(h, coeff).scale(_rational_power(c0, r))


def sqrt(f: ExactSeries) -> ExactSeries:
    return power(f, mpq(1, 2))


def _binom(r: mpq, k: int) -> mpq:
    out = mpq(1)
    for i in range(k):
        out = out * (r - i) / (i + 1)
    return out


def elementary(f: ExactSeries, op: str, r=None) -> ExactSeries:
    """Dispatch ``exp``, ``log``, ``sqrt`` or ``pow`` (with rational ``r``)."""
    if op == "exp":
        return exp(f)
    if op == "log":
        return log(f)
    if op == "sqrt":
        return sqrt(f)
    if op == "pow":
        return power(f, r)
    raise SeriesError(f"unknown elementary function {op!r}")


def binomial_series(ring: SeriesRing, name: str, r, scale=1) -> ExactSeries:
    """``(1 + scale*name)**r`` expanded directly from binomial coefficients."""
    r = as_rational(r)
    scale = as_rational(scale)
    cap = ring.cap(name)
    if cap is None:
        raise SeriesError("binomial_series needs a capped variable")
    i = ring.index(name)
    c = {}
    b = mpq(1)
    for k in range(cap + 1):
        key = tuple(k if j == i else 0 for j in range(ring.nvars))
        c[key] = b * scale ** k
        b = b * (r - k) / (k + 1)
    return ExactSeries(ring, c)


def geometric(ring: SeriesRing, f: ExactSeries) -> ExactSeries:
    """``1/(1 - f)`` for f with zero constant term."""
    return (ring.one() - f).inverse()


# ---------------------------------------------------------------------------
# composition


def compose(outer: ExactSeries, inner, target: SeriesRing | None = None) -> ExactSeries:
    """Substitute series for variables of ``outer``.

    ``inner`` is either a single series (for a univariate ``outer``) or a
    mapping from variable names of ``outer`` to series or constants.
    Variables of ``outer`` that are not mapped are left as themselves.
    A substituted series may have a nonzero constant term only when the
    outer variable is uncapped (the outer series is then a polynomial in it).
    """
    if isinstance(inner, ExactSeries):
        if outer.ring.nvars != 1:
            raise SeriesError("pass a mapping to substitute into a multivariate series")
        inner = {outer.ring.variables[0]: inner}
    subs = dict(inner)
    rings = [s.ring for s in subs.values() if isinstance(s, ExactSeries)]
    if target is None:
        target = rings[0] if rings else outer.ring
        for r in rings[1:]:
            target = target.unify(r)
        for v in outer.ring.variables:
            if v not in subs:
                target = target.unify(outer.ring.without(*[w for w in outer.ring.variables if w != v]))
    images = []
    for i, v in enumerate(outer.ring.variables):
        s = subs.get(v)
        if s is None:
            s = target.gen(v)
        elif not isinstance(s, ExactSeries):
            s = target.constant(s)
        else:
            s = s.embed(target)
        small = outer.ring.caps[i] is not None or (
            outer.ring.weights is not None and outer.ring.weights[i] > 0
        )
        if s.constant_term() and small:
            raise SeriesError(
                f"substitution for truncated variable {v!r} has nonzero constant term"
            )
        images.append(s)
    powers = [_PowerCache(s) for s in images]
    for i, cap in enumerate(outer.ring.caps):
        if cap is not None and not powers[i][cap + 1].is_zero():
            raise SeriesError(
                f"outer cap {cap} on {outer.ring.variables[i]!r} is too low for the target ring"
            )
    if outer.ring.weights is not None:
        _audit_weights(outer.ring, images, target)
    terms = sorted(outer._c.items())
    return _subst(terms, 0, powers, target)


def _grade(target: SeriesRing):
    """(grading function, cap) used to bound what truncated outer terms can reach."""
    if target.weights is not None:
        return target.weighted_degree, target.total_cap
    capped = [i for i, c in enumerate(target.caps) if c is not None]
    if len(capped) != 1:
        raise SeriesError("target ring needs a single capped variable or a total-degree cap")
    g = capped[0]
    return (lambda k: k[g]), target.caps[g]


def _audit_weights(ring: SeriesRing, images, target: SeriesRing) -> None:
    # Outer terms dropped by the weighted cap must vanish in the target: every
    # image must have target grade at least the weight of its variable.
    grade, cap = _grade(target)
    if cap is None or cap > ring.total_cap:
        raise SeriesError("target truncation exceeds the outer total-degree cap")
    for v, w, s in zip(ring.variables, ring.weights, images):
        if w and s._c and min(grade(k) for k in s._c) < w:
            raise SeriesError(f"image of {v!r} has grade below its weight {w}")


class _PowerCache:
    def __init__(self, base: ExactSeries):
        self.base = base
        self.cache = [base.ring.one()]

    def __getitem__(self, k: int) -> ExactSeries:
        while len(self.cache) <= k:
            self.cache.append(self.cache[-1] * self.base)
        return self.cache[k]


def _subst(terms, depth, powers, target) -> ExactSeries:
    if depth == len(powers):
        total = mpq(0)
        for _, v in terms:
            total += v
        return target.constant(total)
    groups: dict = {}
    for k, v in terms:
        groups.setdefault(k[depth], []).append((k, v))
    result = target.zero()
    for e in sorted(groups):
        p = powers[depth][e]
        if p.is_zero():
            continue
        inner = _subst(groups[e], depth + 1, powers, target)
        if not inner.is_zero():
            result = result + (inner * p if e else inner)
    return result


def reversion(g: ExactSeries) -> ExactSeries:
    """Compositional inverse of a univariate g = a1*x + ... with a1 != 0."""
    if g.ring.nvars != 1:
        raise SeriesError("reversion is univariate")
    a1 = g._c.get((1,), mpq(0))
    if g.constant_term() or not a1:
        raise SeriesError("reversion needs g(0) = 0 and g'(0) != 0")
    x = g.ring.gen(g.ring.variables[0])
    rest = g - x.scale(a1)

    def step(h):
        return (x - compose(rest, h.embed(g.ring)).embed(h.ring)).scale(1 / a1)

    return solve_fixed_point(FunctionalEquation(step, g.ring, g.ring.variables[0]), g.ring.caps[0])


# ---------------------------------------------------------------------------
# divided differences and fixed points


def divided_difference(f: ExactSeries, name: str) -> ExactSeries:
    """``(u*f(u) - f(1)) / (u - 1)`` for ``u = name``; exact for polynomials in u."""
    i = f.ring.index(name)
    c: dict = {}
    for k, v in f._c.items():
        d = k[i]
        for j in range(d + 1):
            nk = k[:i] + (j,) + k[i + 1:]
            c[nk] = c.get(nk, 0) + v
    return ExactSeries(f.ring, c)


@dataclass(frozen=True)
class FunctionalEquation:
    """Fixed-point problem ``F = evaluator(F)`` in ``ring``.

    ``variable`` names the grading variable; ``gain`` is the contraction
    witness: if two approximations agree below degree d in ``variable``,
    their images agree below degree d + gain.
    """

    evaluator: Callable[[ExactSeries], ExactSeries]
    ring: SeriesRing
    variable: str
    gain: int = 1
    initial: ExactSeries | None = None


def solve_fixed_point(eq: FunctionalEquation, order: int) -> ExactSeries:
    """Iterate ``eq`` to the unique solution through degree ``order`` in ``eq.variable``.

    Runs ``order + 1`` rounds, raising precision one degree per round, then
    re-applies the evaluator at full precision and checks nothing moves.
    """
    if eq.gain < 1:
        raise ContractionError("contraction witness must be at least 1")
    full = eq.ring.with_caps(**{eq.variable: order})
    current = eq.initial.embed(full) if eq.initial is not None else full.zero()
    for r in range(order + 1):
        ring = full.with_caps(**{eq.variable: min(order, r)})
        current = eq.evaluator(current.embed(ring)).embed(ring)
    current = current.embed(full)
    again = eq.evaluator(current).embed(full)
    if again != current:
        raise ContractionError("fixed-point iteration did not stabilise")
    return current


# ---------------------------------------------------------------------------
# exchange format

FORMAT_TAG = "exact-series/1"


def to_document(f: ExactSeries) -> dict:
    doc = {
        "format": FORMAT_TAG,
        "variables": list(f.ring.variables),
        "semantics": dict(zip(f.ring.variables, f.ring.semantics)),
        "truncation": {"caps": dict(zip(f.ring.variables, f.ring.caps))},
        "entries": [[list(k), f"{v.numerator}/{v.denominator}"] for k, v in sorted(f._c.items())],
    }
    if f.ring.weights is not None:
        doc["truncation"]["weights"] = dict(zip(f.ring.variables, f.ring.weights))
        doc["truncation"]["total_cap"] = f.ring.total_cap
    return doc


def from_document(doc: Mapping) -> ExactSeries:
    if doc.get("format") != FORMAT_TAG:
        raise SeriesError(f"not an {FORMAT_TAG} document")
    try:
        variables = tuple(doc["variables"])
        trunc = doc["truncation"]
        ring = SeriesRing.make(
            variables,
            caps=trunc["caps"],
            semantics=doc["semantics"],
            weights=trunc.get("weights"),
            total_cap=trunc.get("total_cap"),
        )
        coeffs = {}
        for exps, val in doc["entries"]:
            if not isinstance(val, str):
                raise SeriesError("coefficients must be fraction strings")
            key = tuple(int(e) for e in exps)
            if len(key) != len(variables):
                raise SeriesError(f"entry {exps} has the wrong length")
            if not ring.admits(key):
                raise SeriesError(f"entry {exps} exceeds the truncation")
            coeffs[key] = as_rational(val)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SeriesError):
            raise
        raise SeriesError(f"malformed series document: {exc}") from exc
    return ExactSeries(ring, coeffs)


def dumps(f: ExactSeries) -> str:
    return json.dumps(to_document(f), indent=1, sort_keys=True)


def loads(text: str) -> ExactSeries:
    return from_document(json.loads(text))


def from_coefficients(coeffs: Iterable, name="x", semantics=OGF, cap=None) -> ExactSeries:
    """Univariate series from a coefficient list starting at degree 0."""
    coeffs = list(coeffs)
    cap = len(coeffs) - 1 if cap is None else cap
    ring = univariate_ring(name, cap, semantics)
    return ExactSeries(ring, {(i,): as_rational(c) for i, c in enumerate(coeffs) if c})
