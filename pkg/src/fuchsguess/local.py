"""Local analysis of operators at singular points.

Points are rationals, roots of an irreducible polynomial (handled exactly
in the quotient ring) or infinity.  Every analysis first moves the point
to 0 and reads off the theta expansion x^s L = sum_j x^j P_j(theta).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial
from typing import Sequence

import sympy

from .errors import (AmbiguousLiftError, BadPrimeError, IrregularSingularityError,
                     NotAnExponentError)
from .fieldcore import QQ, AlgebraicElement, AlgebraicField, DensePoly, FieldElement, PrimeField
from .operators import DX, THETA, DiffOp
from .series import TruncatedSeries

LIFT_BOUND = 256
LIFT_DENOMINATORS = (1, 2, 4, 8)


@dataclass(frozen=True)
class SingularPoint:
    """A point of the projective line: rational, algebraic or infinity."""

    kind: str  # "rational" | "algebraic" | "infinity"
    value: Fraction | None = None
    minpoly: DensePoly | None = None
    multiplicity: int = dc_field(default=0, compare=False)

    @classmethod
    def at(cls, value, multiplicity: int = 0) -> "SingularPoint":
        return cls("rational", Fraction(value), None, multiplicity)

    @classmethod
    def infinity(cls) -> "SingularPoint":
        return cls("infinity")

    @classmethod
    def root_of(cls, minpoly: DensePoly, multiplicity: int = 0) -> "SingularPoint":
        if minpoly.degree() < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        m = minpoly.monic()
        if m.degree() == 1 and m.field == QQ:
            return cls.at(-m.coeffs[0], multiplicity)
        return cls("algebraic", None, m, multiplicity)

    def label(self) -> str:
        if self.kind == "infinity":
            return "inf"
        if self.kind == "rational":
            return str(self.value)
        return "root(" + " ".join(str(c) for c in self.minpoly.coeffs) + ")"

    def __str__(self):
        return self.label()


INFINITY = SingularPoint.infinity()


def as_point(point) -> SingularPoint:
    """Coerce user input (number, 'inf', polynomial, label string) to a point."""
    if isinstance(point, SingularPoint):
        return point
    if isinstance(point, DensePoly):
        return SingularPoint.root_of(point)
    if isinstance(point, str):
        text = point.strip()
        if text in ("inf", "infinity", "oo"):
            return INFINITY
        if text.startswith("root(") and text.endswith(")"):
            coeffs = [Fraction(t) for t in text[5:-1].split()]
            return SingularPoint.root_of(DensePoly(coeffs, QQ))
        return SingularPoint.at(Fraction(text))
    if point == float("inf"):
        return INFINITY
    return SingularPoint.at(point)


# -- moving points ----------------------------------------------------------

def translate_operator(L: DiffOp, a) -> DiffOp:
    """Operator in t = x - a (so the point x = a moves to t = 0).

    ``a`` may be a rational or an element of an algebraic extension; in the
    latter case the result has coefficients in that extension.
    """
    field = a.field if isinstance(a, AlgebraicElement) else L.field
    Ld = L.to_dx()
    out = [c.taylor_shift(a, field) for c in Ld.coeffs]
    return DiffOp(out, DX, field)


def invert_operator(L: DiffOp) -> DiffOp:
    """Operator in t = 1/x; theta_x = -theta_t, coefficients reversed."""
    T = L.to_theta()
    m = max(c.degree() for c in T.coeffs)
    f = L.field
    out = [DensePoly((), f) for _ in T.coeffs]
    for k, b in enumerate(T.coeffs):
        # b(1/t) * t^m, and theta^k -> (-1)^k theta^k
        out[k] = b.reverse(m).scale(-1 if k % 2 else 1)
    res = DiffOp(out, THETA, f)
    return res if L.basis == THETA else res.to_dx()


def local_operator(L: DiffOp, point) -> DiffOp:
    """L rewritten so that ``point`` sits at the origin."""
    pt = as_point(point)
    if pt.kind == "infinity":
        return invert_operator(L)
    if pt.kind == "rational":
        if pt.value == 0:
            return L
        return translate_operator(L, L.field(pt.value))
    E = AlgebraicField(pt.minpoly.change_field(L.field) if pt.minpoly.field != L.field
                       else pt.minpoly)
    return translate_operator(L, E.generator())


# -- indicial data ----------------------------------------------------------

def theta_rows_at(L: DiffOp, point) -> list[DensePoly]:
    _, rows = local_operator(L, point).theta_rows()
    return rows


def indicial_polynomial(L: DiffOp, point=0) -> DensePoly:
    """Monic indicial polynomial in rho at ``point``.

    Raises IrregularSingularityError when its degree is below the order.
    Over an algebraic point the result is brought back to the base field
    whenever all its coefficients lie there.
    """
    rows = theta_rows_at(L, point)
    P0 = rows[0]
    if P0.degree() != L.order:
        raise IrregularSingularityError(
            f"point {as_point(point)} is irregular: indicial degree {P0.degree()} < order {L.order}")
    P0 = P0.monic()
    return _to_base(P0)


def _to_base(P: DensePoly) -> DensePoly:
    f = P.field
    if isinstance(f, AlgebraicField):
        vals = [c.base_value() for c in P.coeffs]
        if all(v is not None for v in vals):
            return DensePoly(vals, f.base)
    return P


@dataclass(frozen=True)
class IndicialReport:
    point: SingularPoint
    exponents: tuple[tuple[Fraction, int], ...]
    lifted: tuple[bool, ...]
    indicial: DensePoly
    unlifted: tuple = ()
    unlifted_degree: int = 0

    def multiset(self) -> list[Fraction]:
        out = []
        for e, m in self.exponents:
            out.extend([e] * m)
        return out

    def format(self, logs: int | None = None) -> str:
        parts = []
        for e, m in self.exponents:
            parts.append(f"{e}^{m}" if m > 1 else f"{e}")
        if self.unlifted_degree:
            parts.append(f"?^{self.unlifted_degree}")
        line = f"point={self.point.label()} exponents={','.join(parts)}"
        if logs is not None:
            line += f" logs={logs}"
        return line


def _candidates(bound: int, dens: Sequence[int]):
    seen = set()
    for b in dens:
        for a in range(-bound, bound + 1):
            r = Fraction(a, b)
            if r not in seen:
                seen.add(r)
                yield r


def _divide_root(P: DensePoly, r) -> tuple[DensePoly, int]:
    lin = DensePoly([-r, P.field.one], P.field)
    m = 0
    while P.degree() > 0:
        q, rem = P.divmod(lin)
        if rem:
            break
        P, m = q, m + 1
    return P, m


def local_exponents(L: DiffOp, point=0, bound: int = LIFT_BOUND,
                    denominators: Sequence[int] = LIFT_DENOMINATORS) -> IndicialReport:
    """Roots of the indicial polynomial, as exact rationals where possible.

    Over Q the rational roots are exact.  Over a prime field (or an
    extension of one) each root is lifted to a/b with b in
    ``denominators`` and |a| <= bound by testing the candidates.
    """
    pt = as_point(point)
    P = indicial_polynomial(L, pt)
    base = P.field.base if isinstance(P.field, AlgebraicField) else P.field
    found: list[tuple[Fraction, int]] = []
    if P.field == QQ:
        rest = P
        for r in _rational_roots(P):
            rest, m = _divide_root(rest, r)
            found.append((r, m))
        lifted = tuple(False for _ in found)
        exact = True
    else:
        rest = P
        by_residue: dict = {}
        for r in _candidates(bound, denominators):
            try:
                v = P.field(r)
            except BadPrimeError:
                continue
            if P(v) == P.field.zero:
                key = v
                if key in by_residue and by_residue[key] != r:
                    raise AmbiguousLiftError(
                        f"root lifts to both {by_residue[key]} and {r}; choose another prime")
                by_residue[key] = r
        for v, r in sorted(by_residue.items(), key=lambda kv: kv[1]):
            rest, m = _divide_root(rest, v)
            if m:
                found.append((r, m))
        lifted = tuple(True for _ in found)
        exact = False
    found.sort()
    unlifted = ()
    if rest.degree() > 0 and not exact and isinstance(rest.field, PrimeField):
        unlifted = tuple(_roots_mod_p(rest))
    return IndicialReport(pt, tuple(found), lifted, P, unlifted, max(0, rest.degree()))


def _rational_roots(P: DensePoly) -> list[Fraction]:
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(P.coeffs))
    roots = sympy.Poly(expr, x).ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def _roots_mod_p(P: DensePoly) -> list[int]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([int(c) for c in reversed(P.coeffs)], x, modulus=P.field.p)
    out = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            out.append(int(-c0 * pow(int(c1), -1, P.field.p)) % P.field.p)
    return sorted(out)


# -- singular points ---------------------------------------------------------

def _to_sympy(P: DensePoly, x):
    if P.field == QQ:
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(P.coeffs)], x)
    return sympy.Poly([int(c) for c in reversed(P.coeffs)], x, modulus=P.field.p)


def _from_sympy(poly, field) -> DensePoly:
    coeffs = list(reversed(poly.all_coeffs()))
    if field == QQ:
        return DensePoly([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs], QQ)
    return DensePoly([int(c) for c in coeffs], field)


def factor_poly(P: DensePoly) -> list[tuple[DensePoly, int]]:
    """Irreducible monic factors with multiplicities (via sympy)."""
    if P.degree() <= 0:
        return []
    x = sympy.Symbol("x")
    _, facs = _to_sympy(P, x).factor_list()
    out = [(_from_sympy(f, P.field).monic(), m) for f, m in facs]
    out.sort(key=lambda fm: (fm[0].degree(), [int(c) if P.field != QQ else c for c in fm[0].coeffs]))
    return out


def singular_points(L: DiffOp) -> list[SingularPoint]:
    """Finite singularities from the leading coefficient, then infinity."""
    if L.is_zero():
        raise ValueError("zero operator has no singular points")
    lead = L.to_dx().leading()
    pts = []
    for f, m in factor_poly(lead):
        if f.degree() == 1:
            pts.append(SingularPoint("rational", _field_to_fraction(-f.coeffs[0]), None, m))
        else:
            pts.append(SingularPoint("algebraic", None, f, m))
    pts.sort(key=lambda s: (s.kind != "rational", s.value if s.value is not None else 0))
    pts.append(INFINITY)
    return pts


def _field_to_fraction(v) -> Fraction:
    if isinstance(v, FieldElement):
        return Fraction(v.lift())
    return Fraction(v)


# -- formal solutions -------------------------------------------------------

@dataclass
class FormalSolution:
    """sum_k log(x)^k * x^start * series_k, with series_k over the same grid."""

    start: Fraction
    base: Fraction
    logs: list[list]  # logs[k][n] = coefficient of x^(base+n) log(x)^k

    @property
    def max_log(self) -> int:
        return len(self.logs) - 1

    def leading_exponents(self) -> list[tuple[int, Fraction]]:
        """(log power, lowest exponent carrying it), highest power first."""
        out = []
        for k in range(len(self.logs) - 1, -1, -1):
            n = next((i for i, c in enumerate(self.logs[k]) if c), None)
            if n is not None:
                out.append((k, self.base + n))
        return out

    def describe(self) -> str:
        terms = []
        for k, e in self.leading_exponents():
            terms.append(f"[x^{e}]" + (f" ln(x)^{k}" if k > 1 else " ln(x)" if k == 1 else ""))
        return " + ".join(terms)

    def series(self, k: int = 0, field=None) -> TruncatedSeries:
        row = self.logs[k]
        return TruncatedSeries(row, field, self.base, 1, "x")


@dataclass
class LogStructure:
    blocks: list[tuple[int, list[tuple[int, Fraction]]]]

    @property
    def max_log(self) -> int:
        return max((b[0] for b in self.blocks), default=0)

    @property
    def has_logs(self) -> bool:
        return self.max_log > 0


@dataclass
class FormalSolutions:
    point: SingularPoint
    exponents: IndicialReport
    solutions: list[FormalSolution]
    structure: LogStructure
    field: object = None


def _shifted_coeffs(P: DensePoly, e, depth: int):
    """Taylor coefficients P^(i)(e)/i! for i < depth."""
    out = []
    Q = P
    fact = 1
    for i in range(depth):
        if i:
            Q = Q.derivative()
            fact *= i
        out.append(Q(e) / fact if fact != 1 else Q(e))
    return out


def formal_solutions(L: DiffOp, point=0, n: int = 10, bound: int = LIFT_BOUND) -> FormalSolutions:
    """Frobenius basis with logarithms at a regular singular point.

    Each solution starts at one indicial root; logarithms appear exactly
    where a later root of the same exponent class meets a nonzero
    obstruction.  ``n`` is the number of integer steps computed per class.
    """
    pt = as_point(point)
    report = local_exponents(L, pt, bound)
    if report.unlifted_degree:
        raise NotAnExponentError(f"{report.unlifted_degree} exponents at {pt} could not be lifted")
    rows = theta_rows_at(L, pt)
    field = rows[0].field
    roots = dict(report.exponents)
    classes: dict[Fraction, list[Fraction]] = {}
    for e in sorted(roots):
        key = e - (e.numerator // e.denominator)
        classes.setdefault(key, []).append(e)
    sols: list[FormalSolution] = []
    for key, members in classes.items():
        base = members[0]
        span = int(members[-1] - base)
        nsteps = max(n, span + 1)
        for start in members:
            for t in range(roots[start]):
                sols.append(_frobenius_branch(rows, field, base, start, t, roots, nsteps))
    blocks = [(s.max_log, s.leading_exponents()) for s in sols]
    return FormalSolutions(pt, report, sols, LogStructure(blocks), field)


def _frobenius_branch(rows, field, base: Fraction, start: Fraction, t: int,
                      roots: dict, nsteps: int) -> FormalSolution:
    """One solution: coefficient vectors c_n (in the log^k/k! basis)."""
    zero = field.zero
    P0 = rows[0]
    vecs: list[list] = []
    for n in range(nsteps):
        ex = base + n
        e = field(ex)
        if ex < start:
            vecs.append([])
            continue
        # rhs = -sum_{j>=1} P_j(e - j + N) c_{n-j}
        width = max((len(v) for v in vecs[max(0, n - len(rows) + 1):]), default=0)
        rhs = [zero] * width
        for j in range(1, min(n, len(rows) - 1) + 1):
            prev = vecs[n - j]
            if not prev or not rows[j]:
                continue
            a = _shifted_coeffs(rows[j], e - j, len(prev))
            for k in range(len(prev)):
                acc = zero
                for i in range(len(prev) - k):
                    if a[i] and prev[k + i]:
                        acc = acc + a[i] * prev[k + i]
                rhs[k] = rhs[k] - acc
        mu = roots.get(ex, 0)
        if mu == 0 and P0(e) == zero:
            raise BadPrimeError(
                f"indicial polynomial vanishes at {ex} modulo {field.characteristic} only")
        depth = len(rhs) + mu + 1
        a = _shifted_coeffs(P0, e, depth)
        size = len(rhs) + mu
        c = [zero] * size
        if ex == start:
            c[t] = field.one
        # (sum_i a_i c_{k+i}) = rhs_k, a_i = 0 for i < mu
        for k in range(len(rhs) - 1, -1, -1):
            acc = rhs[k]
            for i in range(mu + 1, size - k):
                if a[i] and c[k + i]:
                    acc = acc - a[i] * c[k + i]
            c[k + mu] = acc / a[mu]
        if ex == start:
            # free parameters other than the chosen one stay zero
            pass
        while c and c[-1] == zero:
            c.pop()
        vecs.append(c)
    K = max((len(v) for v in vecs), default=1)
    logs = []
    for k in range(K):
        kf = factorial(k)
        logs.append([(v[k] / kf if k < len(v) else zero) for v in vecs])
    return FormalSolution(start, base, logs)


def residual(L: DiffOp, sol: FormalSolution, point=0) -> list:
    """L applied to a formal solution, per exponent, in the log^k/k! basis.

    Only exponents whose full recurrence window is available are returned;
    all entries are zero for a correct solution.
    """
    rows = theta_rows_at(L, point)
    field = rows[0].field
    zero = field.zero
    K = len(sol.logs)
    vecs = []
    for n in range(len(sol.logs[0])):
        vecs.append([sol.logs[k][n] * factorial(k) for k in range(K)])
    out = []
    for n in range(len(vecs)):
        e = field(sol.base + n)
        total = [zero] * K
        for j in range(0, min(n, len(rows) - 1) + 1):
            prev = vecs[n - j]
            a = _shifted_coeffs(rows[j], e - j, K)
            for k in range(K):
                for i in range(K - k):
                    if a[i] and prev[k + i]:
                        total[k] = total[k] + a[i] * prev[k + i]
        out.append(total)
    return out


# -- apparent singularities ---------------------------------------------------

@dataclass
class ApparentCertificate:
    point: SingularPoint
    passed: bool
    exponents: list[Fraction]
    checks: list[str]

    def __bool__(self):
        return self.passed


def apparent_check(L: DiffOp, point) -> ApparentCertificate:
    """Certify that a root of the leading coefficient is an apparent singularity.

    Passes iff the exponents are distinct nonnegative integers and the
    Frobenius construction meets no logarithmic obstruction.
    """
    pt = as_point(point)
    report = local_exponents(L, pt)
    exps = report.multiset()
    checks = [f"exponents {','.join(str(e) for e in exps)}"]
    if report.unlifted_degree:
        checks.append(f"{report.unlifted_degree} exponents not lifted")
        return ApparentCertificate(pt, False, exps, checks)
    bad = [e for e, m in report.exponents if m > 1 or e.denominator != 1 or e < 0]
    if bad:
        checks.append(f"not distinct nonnegative integers: {','.join(map(str, bad))}")
        return ApparentCertificate(pt, False, exps, checks)
    sols = formal_solutions(L, pt, n=int(max(exps)) + 2)
    ok = True
    for s in sols.solutions:
        has_log = s.max_log > 0
        checks.append(f"solution from x^{s.start}: log coefficient "
                      f"{'nonzero' if has_log else 'vanishes'}")
        ok = ok and not has_log
    return ApparentCertificate(pt, ok, exps, checks)
