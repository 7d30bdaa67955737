"""Linear differential operators with polynomial coefficients.

An operator is stored as a list of polynomials ``coeffs[k]`` multiplying
either ``D**k`` (D = d/dx) or ``theta**k`` (theta = x d/dx).  Conversion
between the two bases is exact: theta -> D is a polynomial identity, while
D -> theta multiplies on the left by a power of x first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .errors import CoefficientDomainError, ParseError
from .fieldcore import QQ, DensePoly, PrimeField, parse_field

DX = "Dx"
THETA = "theta"


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers: x(x-1)...(x-n+1) = sum_k s(n,k) x^k."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


def falling_factorial_poly(k: int, field=QQ) -> DensePoly:
    """rho (rho-1) ... (rho-k+1) as a polynomial in rho."""
    return DensePoly([stirling1(k, i) for i in range(k + 1)], field)


class DiffOp:
    """Immutable differential operator ``sum_k coeffs[k] * B**k`` (B = D or theta)."""

    __slots__ = ("coeffs", "basis", "field")

    def __init__(self, coeffs: Sequence, basis: str = DX, field=None):
        if basis not in (DX, THETA):
            raise ValueError(f"unknown basis {basis!r}")
        polys = []
        for c in coeffs:
            if isinstance(c, DensePoly):
                polys.append(c)
            elif isinstance(c, (list, tuple)):
                polys.append(DensePoly(c, field) if field is not None else DensePoly(c))
            else:
                polys.append(DensePoly([c], field) if field is not None else DensePoly([c]))
        if field is None:
            field = next((p.field for p in polys if p), polys[0].field if polys else QQ)
        polys = [p if p.field == field else
                 DensePoly((), field) if p.is_zero() else _fail_field(p, field) for p in polys]
        while polys and polys[-1].is_zero():
            polys.pop()
        self.coeffs = tuple(polys)
        self.basis = basis
        self.field = field

    # -- constructors --------------------------------------------------
    @classmethod
    def d(cls, field=QQ) -> "DiffOp":
        return cls([DensePoly((), field), DensePoly.constant(1, field)], DX, field)

    @classmethod
    def theta(cls, field=QQ) -> "DiffOp":
        return cls([DensePoly((), field), DensePoly.constant(1, field)], THETA, field)

    @classmethod
    def scalar(cls, c, field=QQ, basis=DX) -> "DiffOp":
        c = c if isinstance(c, DensePoly) else DensePoly.constant(c, field)
        return cls([c], basis, field)

    # -- queries -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max((c.degree() for c in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> DensePoly:
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> DensePoly:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return DensePoly((), self.field)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self.basis != other.basis:
            return self.to_dx() == other.to_dx()
        return self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        return hash((self.coeffs, self.basis))

    def __repr__(self):
        return f"DiffOp(order={self.order}, degree={self.degree}, basis={self.basis}, field={self.field!r})"

    def __str__(self):
        sym = "D" if self.basis == DX else "theta"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c})" + ("" if k == 0 else f"*{sym}^{k}"))
        return " + ".join(parts) if parts else "0"

    # -- basis conversion ----------------------------------------------
    def to_dx(self) -> "DiffOp":
        """Exact conversion using theta^k = sum_j S(k,j) x^j D^j."""
        if self.basis == DX:
            return self
        f = self.field
        out = [DensePoly((), f) for _ in self.coeffs]
        for k, b in enumerate(self.coeffs):
            if not b:
                continue
            for j in range(k + 1):
                s = stirling2(k, j)
                if s:
                    out[j] = out[j] + b.scale(s).shift_up(j)
        return DiffOp(out, DX, f)

    def to_theta(self) -> "DiffOp":
        """Theta form of x^s * L with the smallest s making it polynomial.

        Uses x^k D^k = theta (theta-1) ... (theta-k+1).  The left factor x^s
        does not change the solution space away from 0.
        """
        if self.basis == THETA:
            return self
        f = self.field
        r = self.order
        if r < 0:
            return DiffOp([], THETA, f)
        # x^r L = sum_k a_k x^(r-k) ff_k(theta)
        out = [DensePoly((), f) for _ in range(r + 1)]
        for k, a in enumerate(self.coeffs):
            if not a:
                continue
            shifted = a.shift_up(r - k)
            for i in range(k + 1):
                s = stirling1(k, i)
                if s:
                    out[i] = out[i] + shifted.scale(s)
        v = min(c.valuation() for c in out if c)
        out = [c.shift_down(v) if c else c for c in out]
        return DiffOp(out, THETA, f)

    def in_basis(self, basis: str) -> "DiffOp":
        return self.to_dx() if basis == DX else self.to_theta()

    def theta_rows(self) -> tuple[int, list[DensePoly]]:
        """Expansion x^s L = x^v * sum_j x^j P_j(theta).

        Returns (v, [P_0, P_1, ...]) where the P_j are polynomials in theta
        and P_0 is nonzero; v is relative to the theta form chosen by
        :meth:`to_theta` (so only differences of v are meaningful).
        """
        t = self.to_theta()
        f = self.field
        if t.is_zero():
            return 0, []
        v = min(c.valuation() for c in t.coeffs if c)
        top = max(c.degree() for c in t.coeffs)
        rows = []
        for j in range(v, top + 1):
            rows.append(DensePoly([c[j] for c in t.coeffs], f))
        return v, rows

    # -- algebra -------------------------------------------------------
    def _same(self, other: "DiffOp") -> "DiffOp":
        if self.field != other.field:
            raise CoefficientDomainError(f"operators over {self.field!r} and {other.field!r}")
        return other

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.scalar(other if isinstance(other, DensePoly) else DensePoly.constant(other, self.field),
                                  self.field, self.basis)
        self._same(other)
        a, b = self, other
        if a.basis != b.basis:
            a, b = a.to_dx(), b.to_dx()
        n = max(len(a.coeffs), len(b.coeffs))
        return DiffOp([a[k] + b[k] for k in range(n)], a.basis, self.field)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs], self.basis, self.field)

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.scalar(other if isinstance(other, DensePoly) else DensePoly.constant(other, self.field),
                                  self.field, self.basis)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def left_scale(self, p) -> "DiffOp":
        """Multiply on the left by a polynomial or scalar."""
        if not isinstance(p, DensePoly):
            p = DensePoly.constant(p, self.field)
        return DiffOp([p * c for c in self.coeffs], self.basis, self.field)

    def __mul__(self, other):
        """Operator composition ``self * other`` (apply other first)."""
        if isinstance(other, DiffOp):
            self._same(other)
            return compose(self, other)
        return self.left_scale(other)

    def __rmul__(self, other):
        return self.left_scale(other)

    def __pow__(self, e: int) -> "DiffOp":
        out = DiffOp.scalar(1, self.field, self.basis)
        for _ in range(e):
            out = out * self
        return out

    def derivative_coeffs(self) -> "DiffOp":
        return DiffOp([c.derivative() for c in self.coeffs], self.basis, self.field)

    # -- normalization -------------------------------------------------
    def primitive(self) -> "DiffOp":
        """Divide out the polynomial gcd of all coefficients."""
        if self.is_zero():
            return self
        g = self.coeffs[0]
        for c in self.coeffs[1:]:
            g = g.gcd(c) if g else c
            if g.degree() == 0:
                break
        g = g.monic()
        if g.degree() <= 0:
            return self
        return DiffOp([c.exact_div(g) for c in self.coeffs], self.basis, self.field)

    def normalize(self) -> "DiffOp":
        """Canonical representative of the left K(x)-multiple class.

        Over a prime field: polynomial content removed and the leading
        polynomial made monic.  Over Q: integer primitive with positive
        leading coefficient of the leading polynomial.
        """
        if self.is_zero():
            return self
        op = self.primitive()
        lc = op.leading().lc()
        if self.field != QQ:
            inv = self.field.one / lc
            return DiffOp([c.scale(inv) for c in op.coeffs], op.basis, op.field)
        den = lcm(*(c.denominator_lcm() for c in op.coeffs if c))
        nums = [Fraction(v) * den for c in op.coeffs for v in c.coeffs]
        content = gcd(*(int(v) for v in nums))
        scale = Fraction(den, content)
        if lc * scale < 0:
            scale = -scale
        return DiffOp([c.scale(scale) for c in op.coeffs], op.basis, op.field)

    def make_monic(self) -> "DiffOp":
        """Scale so the leading polynomial is monic (no content removal)."""
        inv = self.field.one / self.leading().lc()
        return DiffOp([c.scale(inv) for c in self.coeffs], self.basis, self.field)

    def equivalent(self, other: "DiffOp") -> bool:
        """Equal up to left multiplication by a nonzero rational function."""
        if self.order != other.order:
            return False
        a, b = self.to_dx().normalize(), other.to_dx().normalize()
        return a.coeffs == b.coeffs

    # -- change of field -----------------------------------------------
    def change_field(self, field) -> "DiffOp":
        return DiffOp([c.change_field(field) for c in self.coeffs], self.basis, field)

    def reduce(self, p: int) -> "DiffOp":
        from .fieldcore import GF

        return self.change_field(GF(p))

    # -- evaluation ----------------------------------------------------
    def __call__(self, series):
        from .series import apply_operator

        return apply_operator(self, series)

    # -- text format ---------------------------------------------------
    def to_text(self) -> str:
        header = self.field.header()
        lines = [f"#basis {self.basis}", f"#order {self.order}", f"#field {header}"]
        for k, c in enumerate(self.coeffs):
            vals = " ".join(self.field.format(v) for v in c.coeffs) if c else "0"
            lines.append(f"coeff {k}: {vals}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, path: str | None = None) -> "DiffOp":
        basis = order = field = None
        rows: dict[int, DensePoly] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                if line.startswith("#basis"):
                    basis = line.split(None, 1)[1].strip()
                    if basis not in (DX, THETA):
                        raise ValueError(f"unknown basis {basis!r}")
                elif line.startswith("#order"):
                    order = int(line.split(None, 1)[1])
                    if order < -1:
                        raise ValueError("order must be >= -1 (-1 is the zero operator)")
                elif line.startswith("#field"):
                    field = parse_field(line.split(None, 1)[1])
                elif line.startswith("#"):
                    raise ValueError(f"unknown header {line.split()[0]!r}")
                elif line.startswith("coeff"):
                    if field is None or order is None or basis is None:
                        raise ValueError("coefficient line before #basis/#order/#field headers")
                    head, _, body = line.partition(":")
                    k = int(head.split()[1])
                    if k in rows or not 0 <= k <= order:
                        raise ValueError(f"bad or repeated coefficient index {k}")
                    vals = [field(Fraction(tok)) for tok in body.split()]
                    rows[k] = DensePoly(vals, field)
                else:
                    raise ValueError(f"unrecognized line {line!r}")
            except (ValueError, IndexError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), lineno, path) from None
        if basis is None or order is None or field is None:
            raise ParseError("missing #basis, #order or #field header", None, path)
        if sorted(rows) != list(range(order + 1)):
            raise ParseError(f"expected coefficient lines 0..{order}", None, path)
        op = cls([rows[k] for k in range(order + 1)], basis, field)
        if op.is_zero():
            return op
        if op.order != order:
            raise ParseError(f"leading coefficient {order} is zero", None, path)
        return op


def _fail_field(p: DensePoly, field):
    raise CoefficientDomainError(f"coefficient over {p.field!r} in an operator over {field!r}")


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Product a*b via the Leibniz rule D^i c = sum_j C(i,j) c^(j) D^(i-j)."""
    if a.is_zero() or b.is_zero():
        return DiffOp([], DX, a.field)
    basis = a.basis if a.basis == b.basis else DX
    if basis == THETA:
        return _compose_theta(a, b)
    a, b = a.to_dx(), b.to_dx()
    f = a.field
    out = [DensePoly((), f) for _ in range(a.order + b.order + 1)]
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        # D^i * (sum_k b_k D^k): differentiate b's coefficients j times
        binom = 1
        derivs = list(b.coeffs)
        for j in range(i + 1):
            if j > 0:
                binom = binom * (i - j + 1) // j
                derivs = [c.derivative() for c in derivs]
            for k, c in enumerate(derivs):
                if c:
                    out[i - j + k] = out[i - j + k] + (ai * c).scale(binom)
    return DiffOp(out, DX, f)


def _compose_theta(a: DiffOp, b: DiffOp) -> DiffOp:
    """theta^i x^m = x^m (theta+m)^i; keeps products in theta basis."""
    f = a.field
    out = [DensePoly((), f) for _ in range(a.order + b.order + 1)]
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        for k, bk in enumerate(b.coeffs):
            for m, c in enumerate(bk.coeffs):
                if not c:
                    continue
                # (theta + m)^i theta^k = sum_l C(i,l) m^(i-l) theta^(l+k)
                binom = 1
                for l in range(i + 1):
                    if l > 0:
                        binom = binom * (i - l + 1) // l
                    coef = c * (binom * m ** (i - l))
                    if coef:
                        out[l + k] = out[l + k] + (ai.shift_up(m)).scale(coef)
    return DiffOp(out, THETA, f)


def op_multiply(a: DiffOp, b: DiffOp) -> DiffOp:
    return compose(a, b)


def from_rational_coeffs(num_den: Sequence[tuple[DensePoly, DensePoly]], basis=DX) -> DiffOp:
    """Build an operator from rational-function coefficients by clearing denominators."""
    field = num_den[0][0].field
    common = DensePoly.constant(1, field)
    for _, d in num_den:
        g = common.gcd(d)
        common = common * d.exact_div(g)
    out = [n * common.exact_div(d) for n, d in num_den]
    return DiffOp(out, basis, field)
