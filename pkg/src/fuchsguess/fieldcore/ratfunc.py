"""Rational functions num/den in one variable, kept in lowest terms."""

from __future__ import annotations

from .poly import DensePoly


class RatFunc:
    """Element of K(x) with a monic denominator coprime to the numerator."""

    __slots__ = ("num", "den")

    def __init__(self, num: DensePoly, den: DensePoly | None = None, reduce: bool = True):
        if den is None:
            den = DensePoly.constant(1, num.field)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = DensePoly.constant(1, num.field)
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                lc = den.lc()
                if lc != num.field.one:
                    inv = num.field.one / lc
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def lift(cls, value, field) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, DensePoly):
            return cls(value, None, reduce=False)
        return cls(DensePoly.constant(value, field), None, reduce=False)

    def _other(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, DensePoly):
            return RatFunc(other, None, reduce=False)
        try:
            return RatFunc(DensePoly.constant(other, self.field), None, reduce=False)
        except Exception:
            return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(DensePoly((), self.field))
        # cross-cancel before multiplying to keep degrees small
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n = self.num.exact_div(g1) * o.num.exact_div(g2)
        d = self.den.exact_div(g2) * o.den.exact_div(g1)
        return RatFunc(n, d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"
