"""Exact arithmetic in the quadratic field Q(sqrt 6).

The map constants sigma = 5 - 2*sqrt(6) and tau = (sqrt(6) - 2)/4 live here,
which lets identities such as ``sigma == tau / (1 + tau)`` be checked exactly.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

D = 6


class QSqrt6:
    """Element ``a + b*sqrt(6)`` with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _lift(cls, other):
        if isinstance(other, QSqrt6):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0)
        try:
            return cls(Fraction(int(other.numerator), int(other.denominator)), 0)
        except AttributeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt6(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt6(-self.a, -self.b)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt6(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt6(self.a * o.a + D * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt6":
        return QSqrt6(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - D * self.b * self.b

    def inverse(self) -> "QSqrt6":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero in Q(sqrt 6)")
        c = self.conjugate()
        return QSqrt6(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QSqrt6(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        """Exact sign, comparing a against -b*sqrt(6) by squaring."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 6 b^2
        d = a * a - D * b * b
        s = (d > 0) - (d < 0)
        return s if a > 0 else -s

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_mpf(self):
        # with opposite signs, a + b*sqrt6 = norm / (a - b*sqrt6) avoids cancellation
        def q(x):
            return mpmath.mpf(x.numerator) / x.denominator

        r = mpmath.sqrt(D)
        if self.a and self.b and (self.a > 0) != (self.b > 0):
            return q(self.norm()) / (q(self.a) - q(self.b) * r)
        return q(self.a) + q(self.b) * r

    def __float__(self):
        return float(self.to_mpf())

    def __repr__(self):
        return f"QSqrt6({self.a}, {self.b})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt(6)"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt(6)"


SQRT6 = QSqrt6(0, 1)


def poly_at(coeffs, point: QSqrt6) -> QSqrt6:
    """Evaluate ``sum c_k point**k`` (rational c_k, Horner)."""
    out = QSqrt6(0)
    for c in reversed(list(coeffs)):
        out = out * point + QSqrt6._lift(c)
    return out
