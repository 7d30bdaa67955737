"""Truncated (possibly ramified) power series and the operations on them.

A series is x^offset * sum_n coeffs[n] x^(n/ramification), known exactly
for n < len(coeffs).  Over a prime field the hot loops run on plain
integer residues.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import (AlignmentError, BadPrimeError, DegenerateExponentError, EmptyInputError,
                     NotAnExponentError, ParityError, ParseError, TruncationError)
from .fieldcore import GF, QQ, DensePoly, FieldElement, PrimeField, parse_field
from .operators import DX, THETA, DiffOp

ALLOWED_RAMIFICATION = (1, 2, 4, 8)
EXPONENT_LIFT_BOUND = 256


class TruncatedSeries:
    """Immutable truncated series over a prime field or Q."""

    __slots__ = ("coeffs", "field", "offset", "ramification", "var")

    def __init__(self, coeffs: Sequence, field=None, offset=0, ramification: int = 1,
                 var: str = "x", normalize: bool = True):
        if field is None:
            field = GF(coeffs[0].modulus) if coeffs and type(coeffs[0]) is FieldElement else QQ
        coeffs = [field(c) for c in coeffs]
        if not coeffs:
            raise EmptyInputError("a truncated series needs at least one coefficient")
        if ramification not in ALLOWED_RAMIFICATION:
            raise AlignmentError(f"ramification {ramification} not in {ALLOWED_RAMIFICATION}")
        if var not in ("x", "w"):
            raise ValueError(f"unknown variable tag {var!r}")
        offset = Fraction(offset)
        if normalize:
            k = 0
            while k < len(coeffs) - 1 and coeffs[k] == field.zero:
                k += 1
            if k and coeffs[k] != field.zero:
                coeffs = coeffs[k:]
                offset += Fraction(k, ramification)
        self.coeffs = tuple(coeffs)
        self.field = field
        self.offset = offset
        self.ramification = ramification
        self.var = var

    # -- queries -------------------------------------------------------
    @property
    def length(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def valid_through(self) -> Fraction:
        """Largest exponent whose coefficient is known."""
        return self.offset + Fraction(len(self.coeffs) - 1, self.ramification)

    def exponent(self, n: int) -> Fraction:
        return self.offset + Fraction(n, self.ramification)

    def is_zero(self) -> bool:
        return all(c == self.field.zero for c in self.coeffs)

    def coefficient(self, e) -> object:
        """Coefficient of x^e (zero below the offset)."""
        e = Fraction(e)
        k = (e - self.offset) * self.ramification
        if k.denominator != 1 or k < 0:
            return self.field.zero
        if k >= len(self.coeffs):
            raise TruncationError(f"x^{e} lies beyond the truncation order")
        return self.coeffs[int(k)]

    def residues(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.coeffs == other.coeffs and self.field == other.field
                and self.offset == other.offset and self.ramification == other.ramification
                and self.var == other.var)

    def __hash__(self):
        return hash((self.coeffs, self.offset, self.ramification))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return (f"TruncatedSeries({self.var}^{self.offset} * [{head}{more}], len={len(self)}, "
                f"field={self.field!r}, b={self.ramification})")

    # -- structural operations -----------------------------------------
    def truncate(self, n: int) -> "TruncatedSeries":
        if n < 1:
            raise TruncationError("cannot truncate below one coefficient")
        return self._like(self.coeffs[:n])

    def _like(self, coeffs, offset=None) -> "TruncatedSeries":
        return TruncatedSeries(coeffs, self.field, self.offset if offset is None else offset,
                               self.ramification, self.var)

    def shift(self, k) -> "TruncatedSeries":
        """Multiply by x^k."""
        return self._like(self.coeffs, self.offset + Fraction(k))

    def scale(self, c) -> "TruncatedSeries":
        c = self.field(c)
        return self._like([v * c for v in self.coeffs])

    def with_ramification(self, b: int) -> "TruncatedSeries":
        """Re-express on the finer exponent grid 1/b (b a multiple of ours)."""
        if b % self.ramification:
            raise AlignmentError(f"cannot refine ramification {self.ramification} to {b}")
        step = b // self.ramification
        if step == 1:
            return self
        out = [self.field.zero] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return TruncatedSeries(out, self.field, self.offset, b, self.var, normalize=False)

    def _aligned(self, other: "TruncatedSeries"):
        if self.field != other.field:
            raise AlignmentError(f"series over {self.field!r} and {other.field!r}")
        if self.var != other.var:
            raise AlignmentError(f"series in {self.var} and {other.var}")
        b = lcm(self.ramification, other.ramification)
        if b not in ALLOWED_RAMIFICATION:
            raise AlignmentError("incompatible ramification")
        a, c = self.with_ramification(b), other.with_ramification(b)
        d = (c.offset - a.offset) * b
        if d.denominator != 1:
            raise AlignmentError(f"offsets {a.offset} and {c.offset} differ by a non-grid amount")
        return a, c, b

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, c, b = self._aligned(other)
        lo = min(a.offset, c.offset)
        top = min(a.valid_through(), c.valid_through())
        n = int((top - lo) * b) + 1
        if n < 1:
            raise TruncationError("sum has no valid coefficients")
        out = [self.field.zero] * n
        for s in (a, c):
            k0 = int((s.offset - lo) * b)
            for i, v in enumerate(s.coeffs[: max(0, n - k0)]):
                out[k0 + i] = out[k0 + i] + v
        return TruncatedSeries(out, self.field, lo, b, self.var)

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        a, c, b = self._aligned(other)
        n = min(len(a), len(c))
        out = _convolve(a.coeffs, c.coeffs, n, self.field)
        return TruncatedSeries(out, self.field, a.offset + c.offset, b, self.var)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """1/s for a series with nonzero leading coefficient."""
        c = self.coeffs
        if c[0] == self.field.zero:
            raise ZeroDivisionError("series with zero leading coefficient")
        inv0 = self.field.one / c[0]
        out = [inv0]
        for n in range(1, len(c)):
            acc = self.field.zero
            for k in range(1, n + 1):
                acc = acc + c[k] * out[n - k]
            out.append(-acc * inv0)
        return TruncatedSeries(out, self.field, -self.offset, self.ramification, self.var)

    def change_field(self, field) -> "TruncatedSeries":
        return TruncatedSeries([field(c) for c in self.coeffs], field, self.offset,
                               self.ramification, self.var, normalize=False)

    def to_poly(self) -> DensePoly:
        if self.ramification != 1 or self.offset.denominator != 1 or self.offset < 0:
            raise AlignmentError("only integral nonnegative offsets convert to polynomials")
        return DensePoly([self.field.zero] * int(self.offset) + list(self.coeffs), self.field)

    # -- text format ---------------------------------------------------
    def to_text(self) -> str:
        if isinstance(self.field, PrimeField):
            lines = [f"#prime {self.field.p}"]
        else:
            lines = ["#field rational"]
        lines.append(f"#var {self.var}")
        lines.append(f"#offset {self.offset.numerator}/{self.offset.denominator}")
        if self.ramification != 1:
            lines.append(f"#ram {self.ramification}")
        lines.append(f"#len {len(self.coeffs)}")
        lines.extend(self.field.format(c) for c in self.coeffs)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, path: str | None = None) -> "TruncatedSeries":
        field = None
        var, offset, ram, length = "x", Fraction(0), 1, None
        coeffs = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                if line.startswith("#"):
                    key, _, val = line[1:].partition(" ")
                    val = val.strip()
                    if coeffs:
                        raise ValueError("header line after coefficients")
                    if key == "prime":
                        field = GF(int(val))
                    elif key == "field":
                        field = parse_field(val)
                    elif key == "var":
                        if val not in ("x", "w"):
                            raise ValueError(f"unknown variable {val!r}")
                        var = val
                    elif key == "offset":
                        num, sep, den = val.partition("/")
                        offset = Fraction(int(num), int(den) if sep else 1)
                    elif key == "ram":
                        ram = int(val)
                        if ram not in ALLOWED_RAMIFICATION:
                            raise ValueError(f"ramification {ram} not allowed")
                    elif key == "len":
                        length = int(val)
                    else:
                        raise ValueError(f"unknown header #{key}")
                else:
                    if field is None:
                        raise ValueError("coefficient before #prime/#field header")
                    coeffs.append(field(Fraction(line)))
            except (ValueError, ZeroDivisionError, BadPrimeError) as exc:
                raise ParseError(str(exc), lineno, path) from None
        if field is None:
            raise ParseError("missing #prime or #field header", None, path)
        if length is None:
            raise ParseError("missing #len header", None, path)
        if length != len(coeffs):
            raise ParseError(f"#len says {length} but {len(coeffs)} coefficients follow", None, path)
        return cls(coeffs, field, offset, ram, var, normalize=False)


def zero_series(n: int, field=QQ, offset=0, var="x") -> TruncatedSeries:
    return TruncatedSeries([field.zero] * n, field, offset, 1, var)


def series_from_poly(p: DensePoly, n: int, var="x") -> TruncatedSeries:
    c = list(p.coeffs[:n]) + [p.field.zero] * max(0, n - len(p.coeffs))
    return TruncatedSeries(c, p.field, 0, 1, var)


def _convolve(a, b, n, field):
    if isinstance(field, PrimeField):
        p = field.p
        ar = [c.residue for c in a[:n]]
        br = [c.residue for c in b[:n]]
        out = []
        for k in range(n):
            acc = 0
            for i in range(k + 1):
                acc += ar[i] * br[k - i]
            out.append(FieldElement._raw(acc % p, p))
        return out
    out = []
    for k in range(n):
        acc = field.zero
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


# -- linear combinations --------------------------------------------------

@dataclass(frozen=True)
class LinearCombination:
    """Weights for a linear combination of named series."""

    weights: tuple[Fraction, ...]
    operands: tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        ops = self.operands or tuple(f"s{i}" for i in range(len(self.weights)))
        object.__setattr__(self, "operands", tuple(ops))
        if len(self.weights) != len(self.operands):
            raise ValueError("weights and operands differ in length")
        if not any(self.weights):
            raise ValueError("at least one weight must be nonzero")


def combine(operands: Sequence[TruncatedSeries], weights) -> TruncatedSeries:
    """Weighted sum, aligned on offsets and truncated to the common valid order."""
    if not isinstance(weights, LinearCombination):
        weights = LinearCombination(tuple(weights))
    if len(operands) != len(weights.weights):
        raise ValueError("number of operands does not match the weights")
    total = None
    for s, w in zip(operands, weights.weights):
        term = s.scale(w)
        total = term if total is None else total + term
    return total


# -- parity -------------------------------------------------------------

def compress_even(s: TruncatedSeries) -> TruncatedSeries:
    """Rewrite an even series in w as a series in x = w^2."""
    if s.ramification != 1 or s.offset.denominator != 1:
        raise ParityError("only integral-offset series in w can be compressed")
    if s.offset % 2:
        raise ParityError("odd leading exponent in w")
    bad = [i for i in range(1, len(s.coeffs), 2) if s.coeffs[i] != s.field.zero]
    if bad:
        raise ParityError(f"nonzero odd coefficient at index {bad[0]}")
    return TruncatedSeries(s.coeffs[::2], s.field, s.offset / 2, 1, "x", normalize=False)


def expand_even(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of compress_even (inserts zeros at odd positions)."""
    out = []
    for c in s.coeffs:
        out.extend((c, s.field.zero))
    out.pop()
    return TruncatedSeries(out, s.field, s.offset * 2, 1, "w", normalize=False)


def series_power(s: TruncatedSeries, m: int) -> TruncatedSeries:
    if m < 1:
        raise ValueError("power must be at least 1")
    result, base = None, s
    while m:
        if m & 1:
            result = base if result is None else result * base
        m >>= 1
        if m:
            base = base * base
    return result


# -- generators -----------------------------------------------------------

def hypergeometric_series(a, b, c, n: int, field=QQ, scale=16) -> TruncatedSeries:
    """2F1([a,b],[c], scale*x) truncated to n terms."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c <= 0 and c.denominator == 1:
        raise ValueError("c must not be a nonpositive integer")
    if n < 1:
        raise ValueError("length must be positive")
    fa, fb, fc, fs = field(a), field(b), field(c), field(scale)
    out = [field.one]
    for k in range(n - 1):
        den = (fc + k) * (k + 1)
        if den == field.zero:
            raise BadPrimeError(f"2F1 denominator (c+{k})({k}+1) vanishes in {field!r}")
        out.append(out[-1] * (fa + k) * (fb + k) * fs / den)
    return TruncatedSeries(out, field, 0, 1, "x", normalize=False)


def elliptic_k_series(n: int, field=QQ) -> TruncatedSeries:
    """2F1([1/2,1/2],[1],16x) = sum binom(2n,n)^2 x^n."""
    return hypergeometric_series(Fraction(1, 2), Fraction(1, 2), 1, n, field)


def elliptic_e_series(n: int, field=QQ) -> TruncatedSeries:
    """2F1([1/2,-1/2],[1],16x)."""
    return hypergeometric_series(Fraction(1, 2), Fraction(-1, 2), 1, n, field)


# -- operators acting on series ---------------------------------------------

def _falling(e, k: int, one):
    out = one
    for i in range(k):
        out = out * (e - i)
    return out


def apply_operator(L: DiffOp, s: TruncatedSeries) -> TruncatedSeries:
    """L(s) with the exact valid length of the result.

    In the D basis each derivative costs one order of validity; in the theta
    basis no validity is lost.
    """
    if L.field != s.field:
        raise AlignmentError(f"operator over {L.field!r}, series over {s.field!r}")
    field = s.field
    b = s.ramification
    N = len(s.coeffs)
    if L.is_zero():
        return TruncatedSeries([field.zero] * N, field, s.offset, b, s.var, normalize=False)
    if L.basis == DX and (s.valid_through() - min(s.offset, 0)) * b + 1 <= L.order:
        raise TruncationError(f"series valid through x^{s.valid_through()} is too short "
                              f"for an order {L.order} operator")
    lows, tops = [], []
    for k, a in enumerate(L.coeffs):
        if a:
            shift = k if L.basis == DX else 0
            lows.append(a.valuation() - shift)
            tops.append(s.valid_through() - shift + a.valuation())
    lo = s.offset + min(lows)
    top = min(tops)
    n_out = int((top - lo) * b) + 1
    if n_out < 1:
        raise TruncationError(f"series valid through x^{s.valid_through()} is too short "
                              f"for an order {L.order} operator")
    prime = isinstance(field, PrimeField)
    p = field.p if prime else None
    vals = [c.residue for c in s.coeffs] if prime else list(s.coeffs)
    zero = 0 if prime else field.zero
    out = [zero] * n_out
    e0 = field(s.offset)
    step = field(Fraction(1, b))
    for k, a in enumerate(L.coeffs):
        if not a:
            continue
        # weights w_n = ff_k(e_n) (D basis) or e_n^k (theta basis)
        if L.basis == DX:
            weights = [_falling(e0 + step * n, k, field.one) for n in range(N)]
            base = int(b * (s.offset - k - lo))
        else:
            weights = [(e0 + step * n) ** k for n in range(N)]
            base = int(b * (s.offset - lo))
        if prime:
            t = [vals[n] * weights[n].residue % p for n in range(N)]
            acoef = [(m, c.residue) for m, c in enumerate(a.coeffs) if c]
        else:
            t = [vals[n] * weights[n] for n in range(N)]
            acoef = [(m, c) for m, c in enumerate(a.coeffs) if c]
        for m, c in acoef:
            start = base + b * m
            for n in range(max(0, -start), min(N, n_out - start)):
                if t[n]:
                    out[start + n] = out[start + n] + c * t[n]
    if prime:
        out = [FieldElement._raw(v % p, p) for v in out]
    return TruncatedSeries(out, field, lo, b, s.var)


def series_from_operator(L: DiffOp, rho, n: int, leading=1) -> TruncatedSeries:
    """The series solution x^rho (leading + c1 x + ...) of L at x = 0.

    Uses the recurrence sum_j P_j(rho + N - j) c_(N-j) = 0 of the theta
    expansion.  A vanishing P_0(rho + N) aborts: with a genuine root it is a
    degenerate exponent, otherwise the prime collides with the recurrence.
    """
    if n < 1:
        raise ValueError("length must be positive")
    field = L.field
    rho = Fraction(rho)
    _, rows = L.theta_rows()
    P0 = rows[0]
    frho = field(rho)
    if P0(frho) != field.zero:
        raise NotAnExponentError(f"{rho} is not a root of the indicial polynomial at 0")
    prime = isinstance(field, PrimeField)
    p = field.p if prime else None
    lead = field(leading)
    out = [lead]
    raw = [lead.residue] if prime else None
    rows_raw = [[c.residue for c in r.coeffs] for r in rows] if prime else None

    def peval(coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        return acc

    for N in range(1, n):
        if prime:
            e = (frho.residue + N) % p
            den = peval(rows_raw[0], e)
            if den == 0:
                _collision(P0, field, rho + N)
            acc = 0
            for j in range(1, min(N, len(rows) - 1) + 1):
                if raw[N - j]:
                    acc += peval(rows_raw[j], (e - j) % p) * raw[N - j]
            val = (-acc) * pow(den, -1, p) % p
            raw.append(val)
        else:
            e = frho + N
            den = P0(e)
            if den == field.zero:
                _collision(P0, field, rho + N)
            acc = field.zero
            for j in range(1, min(N, len(rows) - 1) + 1):
                if out[N - j]:
                    acc = acc + rows[j](e - j) * out[N - j]
            out.append(-acc / den)
    if prime:
        out = [FieldElement._raw(v, p) for v in raw]
    return TruncatedSeries(out, field, rho, 1, "x", normalize=False)


def _collision(P0: DensePoly, field, value: Fraction):
    if field == QQ or abs(value.numerator) <= EXPONENT_LIFT_BOUND * value.denominator:
        raise DegenerateExponentError(
            f"exponent {value} is also an indicial root; use formal_solutions")
    raise BadPrimeError(f"indicial polynomial vanishes at {value} only modulo {field.characteristic}")
