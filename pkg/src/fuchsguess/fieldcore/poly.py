"""Dense univariate polynomials over any coefficient field."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ..errors import CoefficientDomainError
from .fields import QQ, FieldElement, field_of


class DensePoly:
    """Immutable dense polynomial; ``coeffs[i]`` multiplies ``x**i``.

    Trailing zeros are stripped on construction, so ``coeffs`` is empty
    exactly for the zero polynomial.
    """

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Iterable = (), field=None):
        coeffs = list(coeffs)
        if field is None:
            field = field_of(coeffs[0]) if coeffs else QQ
            for c in coeffs:
                if type(c) is FieldElement:
                    field = field_of(c)
                    break
        coeffs = [field(c) for c in coeffs]
        zero = field.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.field = field

    @classmethod
    def _make(cls, coeffs: list, field) -> "DensePoly":
        """Construct from already-coerced coefficients (strips zeros)."""
        zero = field.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        obj = object.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.field = field
        return obj

    @classmethod
    def x(cls, field=QQ) -> "DensePoly":
        return cls._make([field.zero, field.one], field)

    @classmethod
    def constant(cls, c, field=QQ) -> "DensePoly":
        return cls._make([field(c)], field)

    @classmethod
    def monomial(cls, k: int, field=QQ, c=1) -> "DensePoly":
        return cls._make([field.zero] * k + [field(c)], field)

    @classmethod
    def from_roots(cls, roots: Sequence, field=QQ) -> "DensePoly":
        out = cls.constant(1, field)
        for r in roots:
            out = out * cls._make([-field(r), field.one], field)
        return out

    # -- basic queries -------------------------------------------------
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def valuation(self) -> int:
        """Index of the lowest nonzero coefficient (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c != self.field.zero:
                return i
        return 0

    def __eq__(self, other):
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs and (self.field == other.field or not self.coeffs)
        if self.degree() <= 0:
            return self[0] == other
        return False

    def __hash__(self):
        return hash(self.coeffs)

    def _check(self, other: "DensePoly"):
        if self.field != other.field:
            raise CoefficientDomainError(f"polynomials over {self.field!r} and {other.field!r}")

    def _lift(self, other) -> "DensePoly | None":
        if isinstance(other, DensePoly):
            self._check(other)
            return other
        try:
            return DensePoly._make([self.field(other)], self.field)
        except CoefficientDomainError:
            return None

    # -- ring operations -----------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return DensePoly._make(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return DensePoly._make([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return DensePoly._make([], self.field)
        if len(b) == 1:
            c = b[0]
            return DensePoly._make([x * c for x in a], self.field)
        if len(a) == 1:
            c = a[0]
            return DensePoly._make([c * y for y in b], self.field)
        if self.field.characteristic:
            return self._mul_mod_p(o)
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return DensePoly._make(out, self.field)

    __rmul__ = __mul__

    def _mul_mod_p(self, o: "DensePoly") -> "DensePoly":
        if type(self.coeffs[0]) is not FieldElement:
            # extension fields fall back to the generic loop
            out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
            for i, x in enumerate(self.coeffs):
                for j, y in enumerate(o.coeffs):
                    out[i + j] = out[i + j] + x * y
            return DensePoly._make(out, self.field)
        p = self.field.p
        a = [c.residue for c in self.coeffs]
        b = [c.residue for c in o.coeffs]
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        mk = FieldElement._raw
        return DensePoly._make([mk(v % p, p) for v in out], self.field)

    def __pow__(self, e: int) -> "DensePoly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = DensePoly.constant(1, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "DensePoly":
        c = self.field(c)
        return DensePoly._make([x * c for x in self.coeffs], self.field)

    def shift_up(self, k: int) -> "DensePoly":
        """Multiply by x**k."""
        if not self.coeffs:
            return self
        return DensePoly._make([self.field.zero] * k + list(self.coeffs), self.field)

    def shift_down(self, k: int) -> "DensePoly":
        """Exact division by x**k (lowest k coefficients must vanish)."""
        if any(c for c in self.coeffs[:k]):
            raise ArithmeticError(f"polynomial not divisible by x^{k}")
        return DensePoly._make(list(self.coeffs[k:]), self.field)

    def truncate(self, n: int) -> "DensePoly":
        return DensePoly._make(list(self.coeffs[:n]), self.field)

    # -- division ------------------------------------------------------
    def divmod(self, other: "DensePoly") -> tuple["DensePoly", "DensePoly"]:
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree()
        if len(r) - 1 < db:
            return DensePoly._make([], self.field), self
        inv = self.field.one / other.coeffs[-1]
        b = other.coeffs
        q = [self.field.zero] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for j in range(db + 1):
                    r[k + j] = r[k + j] - c * b[j]
        return DensePoly._make(q, self.field), DensePoly._make(r[:db], self.field)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "DensePoly") -> "DensePoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "DensePoly") -> bool:
        """True when self divides other."""
        return not (other % self).coeffs

    def monic(self) -> "DensePoly":
        if not self.coeffs:
            return self
        return self.scale(self.field.one / self.coeffs[-1])

    def xgcd(self, other: "DensePoly"):
        """Return (g, s, t) with s*self + t*other = g, g monic."""
        self._check(other)
        one = DensePoly.constant(1, self.field)
        zero = DensePoly._make([], self.field)
        r0, r1, s0, s1, t0, t1 = self, other, one, zero, zero, one
        while r1.coeffs:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0.coeffs:
            return r0, s0, t0
        inv = self.field.one / r0.coeffs[-1]
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def gcd(self, other: "DensePoly") -> "DensePoly":
        self._check(other)
        if self.field == QQ and self.coeffs and other.coeffs:
            return self._gcd_rational(other)
        a, b = self, other
        while b.coeffs:
            a, b = b, a % b
        return a.monic()

    def _gcd_rational(self, other: "DensePoly") -> "DensePoly":
        # Euclid over Q blows up the coefficients; sympy's integer gcd does not.
        from sympy import QQ as SQQ, Poly, Rational, Symbol

        x = Symbol("x")

        def conv(p):
            return Poly([Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)],
                        x, domain=SQQ)

        g = conv(self).gcd(conv(other))
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        return DensePoly._make(coeffs, QQ).monic()

    # -- calculus and evaluation ---------------------------------------
    def derivative(self, n: int = 1) -> "DensePoly":
        out = self
        for _ in range(n):
            out = DensePoly._make([c * i for i, c in enumerate(out.coeffs)][1:], out.field)
        return out

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "DensePoly") -> "DensePoly":
        acc = DensePoly._make([], self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def taylor_shift(self, a, field=None) -> "DensePoly":
        """Return p(x + a), optionally over an extension field containing a."""
        field = field or self.field
        a = field(a)
        c = [field(x) for x in self.coeffs]
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return DensePoly._make(c, field)

    def reverse(self, n: int | None = None) -> "DensePoly":
        """x**n * p(1/x) with n defaulting to the degree."""
        if n is None:
            n = self.degree()
        c = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return DensePoly(list(reversed(c[: n + 1])), self.field)

    def map_coeffs(self, func, field) -> "DensePoly":
        return DensePoly([func(c) for c in self.coeffs], field)

    def change_field(self, field) -> "DensePoly":
        """Coerce coefficients into another field (e.g. reduce Q -> GF(p))."""
        return DensePoly([field(c) for c in self.coeffs], field)

    # -- rational-coefficient helpers ----------------------------------
    def denominator_lcm(self) -> int:
        return lcm(1, *(Fraction(c).denominator for c in self.coeffs))

    def integer_content(self) -> int:
        return gcd(*(Fraction(c).numerator for c in self.coeffs))

    # -- display -------------------------------------------------------
    def __repr__(self):
        return f"DensePoly({[str(c) for c in self.coeffs]}, {self.field!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            s = str(c)
            if i == 0:
                terms.append(s)
            elif i == 1:
                terms.append(f"{s}*x")
            else:
                terms.append(f"{s}*x^{i}")
        return " + ".join(terms)


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd of two polynomials over a common field."""
    return a.gcd(b)
