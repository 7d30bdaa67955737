"""Coefficient fields: prime fields, the rationals and algebraic extensions.

Elements of a prime field are :class:`FieldElement` objects carrying their
residue and modulus; rationals are plain :class:`fractions.Fraction`
values.  Every field object exposes the same small protocol
(``zero``, ``one``, ``__call__`` for coercion, ``characteristic``) so the
polynomial and operator layers can stay generic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational

from sympy import isprime

from ..errors import BadPrimeError, CoefficientDomainError

MAX_PRIME_BITS = 62


class FieldElement:
    """Residue class modulo a word-size prime."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int):
        self.residue = residue % modulus
        self.modulus = modulus

    @classmethod
    def _raw(cls, residue: int, modulus: int) -> "FieldElement":
        obj = object.__new__(cls)
        obj.residue = residue
        obj.modulus = modulus
        return obj

    def _coerce(self, other) -> int | None:
        if type(other) is FieldElement:
            if other.modulus != self.modulus:
                raise CoefficientDomainError(
                    f"cannot combine residues mod {self.modulus} and mod {other.modulus}")
            return other.residue
        if isinstance(other, Integral):
            return int(other) % self.modulus
        if isinstance(other, Rational):
            return reduce_rational(Fraction(other), self.modulus)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return FieldElement._raw((self.residue + o) % p, p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return FieldElement._raw((self.residue - o) % p, p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return FieldElement._raw((o - self.residue) % p, p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return FieldElement._raw(self.residue * o % p, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError(f"division by zero mod {self.modulus}")
        p = self.modulus
        return FieldElement._raw(self.residue * pow(o, -1, p) % p, p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw(o, self.modulus) / self

    def __neg__(self):
        p = self.modulus
        return FieldElement._raw((-self.residue) % p, p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        p = self.modulus
        if e < 0:
            if self.residue == 0:
                raise ZeroDivisionError(f"division by zero mod {p}")
            return FieldElement._raw(pow(pow(self.residue, -1, p), -e, p), p)
        return FieldElement._raw(pow(self.residue, e, p), p)

    def inverse(self) -> "FieldElement":
        return self ** -1

    def __bool__(self):
        return self.residue != 0

    def __eq__(self, other):
        if type(other) is FieldElement:
            return self.modulus == other.modulus and self.residue == other.residue
        try:
            o = self._coerce(other)
        except (BadPrimeError, CoefficientDomainError):
            return False
        if o is None:
            return NotImplemented
        return self.residue == o

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __int__(self):
        return self.residue

    def __index__(self):
        return self.residue

    def lift(self) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        r, p = self.residue, self.modulus
        return r - p if r > p // 2 else r

    def __repr__(self):
        return f"FieldElement({self.residue}, {self.modulus})"

    def __str__(self):
        return str(self.residue)


def reduce_rational(r: Fraction, p: int) -> int:
    """Residue of a rational modulo p; raises BadPrimeError if p | den."""
    den = r.denominator % p
    if den == 0:
        raise BadPrimeError(f"denominator {r.denominator} vanishes modulo {p}")
    return r.numerator * pow(den, -1, p) % p


class PrimeField:
    """The field Z/pZ for a prime p with 2 < p < 2**62."""

    __slots__ = ("p", "zero", "one")

    def __init__(self, p: int):
        p = int(p)
        if p <= 2 or p.bit_length() > MAX_PRIME_BITS or not isprime(p):
            raise BadPrimeError(f"{p} is not an odd prime below 2**{MAX_PRIME_BITS}")
        self.p = p
        self.zero = FieldElement._raw(0, p)
        self.one = FieldElement._raw(1, p)

    @property
    def characteristic(self) -> int:
        return self.p

    is_exact = False

    def __call__(self, v) -> FieldElement:
        if type(v) is FieldElement:
            if v.modulus != self.p:
                raise CoefficientDomainError(f"residue mod {v.modulus} used in GF({self.p})")
            return v
        if isinstance(v, Integral):
            return FieldElement._raw(int(v) % self.p, self.p)
        if isinstance(v, Rational):
            return FieldElement._raw(reduce_rational(Fraction(v), self.p), self.p)
        if isinstance(v, str):
            return self(Fraction(v))
        raise CoefficientDomainError(f"cannot coerce {v!r} into GF({self.p})")

    def contains(self, v) -> bool:
        return type(v) is FieldElement and v.modulus == self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def format(self, v) -> str:
        return str(self(v).residue)

    def header(self) -> str:
        return f"prime {self.p}"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


# The word-size prime descriptor; kept as a separate name for readability.
PrimeModulus = PrimeField


class RationalField:
    """The rationals, with :class:`Fraction` elements."""

    characteristic = 0
    is_exact = True
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, v) -> Fraction:
        if type(v) is Fraction:
            return v
        if isinstance(v, FieldElement):
            raise CoefficientDomainError("cannot coerce a modular residue into Q")
        if isinstance(v, (Integral, Rational, str)):
            return Fraction(v)
        raise CoefficientDomainError(f"cannot coerce {v!r} into Q")

    def contains(self, v) -> bool:
        return type(v) is Fraction

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def format(self, v) -> str:
        return str(Fraction(v))

    def header(self) -> str:
        return "rational"


QQ = RationalField()


def field_of(value):
    """Return the natural field of a scalar (ints and Fractions map to QQ)."""
    if type(value) is FieldElement:
        return GF(value.modulus)
    if isinstance(value, AlgebraicElement):
        return value.field
    return QQ


def parse_field(text: str):
    """Parse ``prime <p>`` / ``rational`` into a field object."""
    parts = text.split()
    if parts == ["rational"]:
        return QQ
    if len(parts) == 2 and parts[0] == "prime" and parts[1].isdigit():
        return GF(int(parts[1]))
    raise ValueError(f"unknown field description {text!r}")


class AlgebraicField:
    """Quotient ring base[t]/(m) with m irreducible; elements are AlgebraicElement.

    Used to work at a root of an irreducible factor without approximating it.
    Inversion fails with ZeroDivisionError when m turns out to be reducible
    and the element shares a factor with it.
    """

    def __init__(self, minpoly):
        from .poly import DensePoly  # local import: poly depends on this module

        if not isinstance(minpoly, DensePoly) or minpoly.degree() < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        self.minpoly = minpoly.monic()
        self.base = minpoly.field
        self.degree = self.minpoly.degree()
        self.zero = AlgebraicElement(self, ())
        self.one = AlgebraicElement(self, (self.base.one,))

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    is_exact = property(lambda self: self.base.is_exact)

    def generator(self) -> "AlgebraicElement":
        """The class of t, i.e. the root being modelled."""
        if self.degree == 1:
            return AlgebraicElement(self, (-self.minpoly.coeffs[0],))
        return AlgebraicElement(self, (self.base.zero, self.base.one))

    def __call__(self, v) -> "AlgebraicElement":
        if isinstance(v, AlgebraicElement):
            if v.field != self:
                raise CoefficientDomainError("elements of different extensions")
            return v
        return AlgebraicElement(self, (self.base(v),))

    def from_poly(self, poly) -> "AlgebraicElement":
        return AlgebraicElement(self, tuple((poly % self.minpoly).coeffs))

    def __eq__(self, other):
        return isinstance(other, AlgebraicField) and other.minpoly == self.minpoly

    def __hash__(self):
        return hash(("ext", self.minpoly))

    def __repr__(self):
        return f"{self.base!r}[t]/({self.minpoly})"

    def format(self, v) -> str:
        return str(self(v))


class AlgebraicElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: AlgebraicField, coeffs):
        zero = field.base.zero
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    def _poly(self):
        from .poly import DensePoly

        return DensePoly(self.coeffs, self.field.base)

    def _coerce(self, other):
        if isinstance(other, AlgebraicElement):
            if other.field != self.field:
                raise CoefficientDomainError("elements of different extensions")
            return other
        if isinstance(other, (Integral, Rational, FieldElement)):
            return AlgebraicElement(self.field, (self.field.base(other),))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        z = self.field.base.zero
        return AlgebraicElement(self.field, [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
                                             for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicElement(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return self.field.zero
        if len(o.coeffs) == 1:
            c = o.coeffs[0]
            return AlgebraicElement(self.field, [a * c for a in self.coeffs])
        if len(self.coeffs) == 1:
            c = self.coeffs[0]
            return AlgebraicElement(self.field, [c * b for b in o.coeffs])
        return self.field.from_poly(self._poly() * o._poly())

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicElement":
        if not self.coeffs:
            raise ZeroDivisionError("division by zero in algebraic extension")
        g, s, _ = self._poly().xgcd(self.field.minpoly)
        if g.degree() != 0:
            raise ZeroDivisionError("element is a zero divisor: modulus is reducible")
        return self.field.from_poly(s * (self.field.base.one / g.coeffs[0]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.coeffs) == 1:
            inv = self.field.base.one / o.coeffs[0]
            return AlgebraicElement(self.field, [a * inv for a in self.coeffs])
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except CoefficientDomainError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def base_value(self):
        """The element as a base-field scalar, or None if it is not one."""
        if len(self.coeffs) > 1:
            return None
        return self.coeffs[0] if self.coeffs else self.field.base.zero

    def __repr__(self):
        return f"AlgebraicElement({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs) if c)
