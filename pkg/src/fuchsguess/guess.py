"""Guessing linear ODEs from series, and the ODE-size formula.

An annihilator of order Q and degree D in the theta basis,
sum_{i<=D, k<=Q} c_ik x^i theta^k, applied to x^rho sum s_n x^n gives the
linear conditions sum_ik c_ik (rho+n-i)^k s_(n-i) = 0, one per n.  The
number of independent solutions f of this system and the number of terms
it needs are tied together by N = (Q+1)(D+1) - f = dQ + qD - C.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (IntegralityError, ModelError, NeedMoreTermsError, NoOdeFoundError)
from .fieldcore import QQ, DensePoly, FieldElement, PrimeField
from .fieldcore.linalg import nullspace, nullspace_mod_p, row_profile_mod_p, rref_generic
from .operators import DX, THETA, DiffOp
from .series import TruncatedSeries, apply_operator

log = logging.getLogger(__name__)

DEFAULT_GUARD = 10


@dataclass(frozen=True)
class GuessProblem:
    series: TruncatedSeries | tuple[TruncatedSeries, ...]
    Q: int
    D: int
    basis: str = THETA
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.Q < 1 or self.D < 0:
            raise ValueError("need Q >= 1 and D >= 0")
        if self.guard < 0:
            raise ValueError("guard must be nonnegative")
        if self.basis not in (DX, THETA):
            raise ValueError(f"unknown basis {self.basis!r}")
        if isinstance(self.series, TruncatedSeries):
            object.__setattr__(self, "series", (self.series,))
        else:
            object.__setattr__(self, "series", tuple(self.series))

    @property
    def unknowns(self) -> int:
        return (self.Q + 1) * (self.D + 1)

    @property
    def required_terms(self) -> int:
        return self.unknowns + self.guard


@dataclass
class GuessResult:
    Q: int
    D: int
    f: int
    operators: list[DiffOp]
    N_used: int
    series_length: int = 0

    @property
    def found(self) -> bool:
        return self.f > 0

    def formula_terms(self) -> int:
        return (self.Q + 1) * (self.D + 1) - self.f


def _system_rows(s: TruncatedSeries, Q: int, D: int, basis: str, nrows: int):
    """Coefficient matrix rows for one series (residues when over GF(p)).

    Column i*(Q+1)+k holds the unknown multiplying x^i B^k; row n is the
    coefficient of x^(rho+n) (theta basis) or x^(rho+n-Q) (D basis).
    """
    field = s.field
    prime = isinstance(field, PrimeField)
    p = field.p if prime else None
    if s.ramification != 1:
        raise ValueError("guessing needs an unramified series (integer exponent steps)")
    vals = [c.residue for c in s.coeffs] if prime else list(s.coeffs)
    rho = field(s.offset)
    ncols = (Q + 1) * (D + 1)
    zero = 0 if prime else field.zero
    if basis == THETA:
        # powers (rho+m)^k * s_m, shared by all shifts i
        table = []
        for m, sv in enumerate(vals):
            e = rho + m
            ev = e.residue if prime else e
            pw, row = sv, []
            for _ in range(Q + 1):
                row.append(pw)
                pw = pw * ev % p if prime else pw * ev
            table.append(row)
    else:
        table = []
        for m, sv in enumerate(vals):
            e = rho + m
            ff, row = field.one, []
            for k in range(Q + 1):
                row.append(sv * ff.residue % p if prime else sv * ff)
                ff = ff * (e - k)
            table.append(row)
    rows = []
    for n in range(nrows):
        row = [zero] * ncols
        for i in range(D + 1):
            for k in range(Q + 1):
                m = n - i if basis == THETA else n - Q - i + k
                if 0 <= m < len(vals):
                    row[i * (Q + 1) + k] = table[m][k]
        rows.append(row)
    return rows


def _operator_from_vector(vec, Q: int, D: int, basis: str, field) -> DiffOp:
    coeffs = []
    for k in range(Q + 1):
        coeffs.append(DensePoly([vec[i * (Q + 1) + k] for i in range(D + 1)], field))
    op = DiffOp(coeffs, basis, field)
    return op


def _rows_available(s: TruncatedSeries, Q: int, basis: str) -> int:
    return len(s)


def guess_ode(problem: GuessProblem) -> GuessResult:
    """Solve the annihilator system and re-verify on the guard terms."""
    Q, D, basis = problem.Q, problem.D, problem.basis
    series = problem.series
    field = series[0].field
    for s in series:
        if s.field != field:
            raise ValueError("all series must share one coefficient field")
        avail = _rows_available(s, Q, basis)
        if avail < problem.required_terms:
            raise NeedMoreTermsError(
                f"need {problem.required_terms} terms for (Q,D)=({Q},{D}) with guard "
                f"{problem.guard}, have {avail}", problem.required_terms, avail)
    all_rows = []
    per_series = []
    for s in series:
        rows = _system_rows(s, Q, D, basis, _rows_available(s, Q, basis))
        per_series.append(len(rows))
        all_rows.extend(rows)
    ncols = problem.unknowns
    if isinstance(field, PrimeField):
        p = field.p
        arr = np.array(all_rows, dtype=np.int64 if p < (1 << 31) else object)
        basis_vecs = nullspace_mod_p(arr, p)
        if len(series) == 1:
            prof = row_profile_mod_p(arr, p)
            n_used = (prof[-1] + 1) if prof else 0
        else:
            n_used = ncols - len(basis_vecs)
        mk = FieldElement._raw
        vecs = [[mk(int(v), p) for v in row] for row in basis_vecs]
    else:
        vecs = nullspace(all_rows, field)
        if len(series) == 1:
            # rank-increasing rows of the transposed system
            cols = [list(c) for c in zip(*all_rows)]
            _, piv = rref_generic(cols)
            n_used = (piv[-1] + 1) if piv else 0
        else:
            n_used = ncols - len(vecs)
    ops = [_operator_from_vector(v, Q, D, basis, field) for v in vecs]
    ops = [op.to_dx() for op in ops]
    # independent re-check of every solution over the full validated length
    for op in ops:
        for s in series:
            r = apply_operator(op, s)
            if not r.is_zero():
                raise AssertionError("nullspace solution fails to annihilate the series")
    log.debug("guess Q=%d D=%d: f=%d N_used=%d", Q, D, len(ops), n_used)
    return GuessResult(Q, D, len(ops), ops, n_used, min(len(s) for s in series))


def max_degree_for(length: int, Q: int, guard: int = DEFAULT_GUARD) -> int:
    """Largest D with (Q+1)(D+1) + guard <= length (or -1)."""
    return (length - guard) // (Q + 1) - 1


# -- the ODE formula --------------------------------------------------------

@dataclass(frozen=True)
class OdeFormulaModel:
    """N = d*Q + q*D - C, valid for Q >= q whenever f >= 1."""

    d: int
    q: int
    C: int

    def __post_init__(self):
        if self.q < 1 or self.d < 0:
            raise ModelError(f"invalid model d={self.d} q={self.q}")

    @property
    def D_app(self) -> int:
        """Degree of the apparent polynomial of the minimal-order operator."""
        return (self.d - 1) * (self.q - 1) - self.C - 1

    def N(self, Q: int, D: int) -> int:
        return self.d * Q + self.q * D - self.C

    def f(self, Q: int, D: int) -> int:
        """Nullspace dimension predicted at (Q, D) (0 outside the solvable region)."""
        return max(0, (Q - self.q + 1) * (D - self.d + 1) - self.D_app)

    def degree_for(self, Q: int, f: int) -> Fraction:
        """D on the f-th hyperbola: D = d - 1 + (D_app + f)/(Q - q + 1)."""
        if Q < self.q:
            raise ValueError(f"Q={Q} below the minimal order {self.q}")
        return self.d - 1 + Fraction(self.D_app + f, Q - self.q + 1)

    def report(self) -> str:
        return f"d={self.d}\nq={self.q}\nC={self.C}\nD_app={self.D_app}\n"


def fit_formula(samples: Sequence[tuple[int, int, int]]) -> OdeFormulaModel:
    """Exact integer fit of (d, q, C) from (Q, D, N) samples."""
    pts = [tuple(int(v) for v in s) for s in samples]
    basis = _independent_triple(pts)
    if basis is None:
        raise ModelError("need three affinely independent (Q, D) samples")
    rows = [[Fraction(Q), Fraction(D), Fraction(-1), Fraction(N)] for Q, D, N in basis]
    rref, piv = rref_generic(rows)
    if piv != [0, 1, 2]:
        raise ModelError("samples do not determine the model")
    d, q, C = (rref[i][3] for i in range(3))
    if any(v.denominator != 1 for v in (d, q, C)):
        raise ModelError(f"non-integral model d={d} q={q} C={C}")
    model = OdeFormulaModel(int(d), int(q), int(C))
    bad = [s for s in pts if model.N(s[0], s[1]) != s[2]]
    if bad:
        raise ModelError(f"samples {bad} contradict the fitted model {model}")
    return model


def _independent_triple(pts):
    n = len(pts)
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                (q1, d1, _), (q2, d2, _), (q3, d3, _) = pts[a], pts[b], pts[c]
                if (q2 - q1) * (d3 - d1) - (q3 - q1) * (d2 - d1) != 0:
                    return [pts[a], pts[b], pts[c]]
    return None


@dataclass(frozen=True)
class OptimalTriplet:
    Q0: int
    D0: int
    f0: int
    N0: int
    at_boundary: bool = False

    @property
    def terms(self) -> int:
        """(Q0+1)(D0+1): coefficients that enter the linear system."""
        return (self.Q0 + 1) * (self.D0 + 1)

    def report(self) -> str:
        return f"Q0={self.Q0} D0={self.D0} f0={self.f0} N0={self.N0}"


def optimal_scan(model: OdeFormulaModel, f_max: int | None = None,
                 Q_max: int | None = None, prefer: str = "larger_Q") -> OptimalTriplet:
    """Exhaustive search for the (Q, D, f) minimizing N = (Q+1)(D+1) - f.

    Only points where D = d - 1 + (D_app + f)/(Q - q + 1) is an integer are
    feasible.  Ties in N are broken by Q (larger first by default, matching
    the reference tables; ``prefer="smaller_Q"`` flips it), then smaller f.
    """
    if f_max is None:
        f_max = max(64, 2 * int(math.isqrt(max(1, model.D_app))) + 8)
    if Q_max is None:
        cont = continuous_optimum(model, 1)
        Q_max = max(model.q + 4, int(4 * cont[0]) + model.q + 8)
    best = None
    for f in range(1, f_max + 1):
        num = model.D_app + f
        for Q in range(model.q, Q_max + 1):
            span = Q - model.q + 1
            if num % span:
                continue
            D = model.d - 1 + num // span
            N = (Q + 1) * (D + 1) - f
            key = (N, -Q if prefer == "larger_Q" else Q, f)
            if best is None or key < best[0]:
                best = (key, Q, D, f, N)
    if best is None:
        raise ModelError("no feasible (Q, f) within bounds")
    _, Q, D, f, N = best
    boundary = Q == Q_max or f == f_max
    if boundary:
        log.warning("optimal scan hit its bounds (Q_max=%d, f_max=%d)", Q_max, f_max)
    return OptimalTriplet(Q, D, f, N, boundary)


def continuous_optimum(model: OdeFormulaModel, f: int = 1) -> tuple[float, float, float]:
    """Stationary point of N along the f-th hyperbola (real-valued)."""
    s = math.sqrt((model.D_app + f) * model.q * model.d)
    Q0 = model.q - 1 + s / model.d if model.d else float(model.q - 1)
    D0 = model.d - 1 + s / model.q
    N0 = model.q * model.d + model.D_app + 2 * s
    return Q0, D0, N0


def terms_required(model: OdeFormulaModel, Q: int, f: int) -> int:
    """N on the f-th hyperbola; the matching D must be an integer."""
    D = model.degree_for(Q, f)
    if D.denominator != 1:
        raise IntegralityError(f"D = {D} is not an integer at Q={Q}, f={f}")
    return model.N(Q, int(D))


def hyperbola_terms(model: OdeFormulaModel, Q, f) -> Fraction:
    """N(Q, f) = (Q+1) d + D_app + (D_app+f) q/(Q-q+1), as a rational."""
    return (Fraction(Q + 1) * model.d + model.D_app
            + Fraction((model.D_app + f) * model.q, Q - model.q + 1))


def gain(model: OdeFormulaModel, Q1: int | None = None, Q2: int | None = None) -> int:
    """Saving in terms between the minimal order q and order q+1.

    At Q = q the first solution needs f1 = 1; at Q = q+1 the smallest f
    keeping D integral has the parity of D_app.  Returns N(q) - N(q+1).
    """
    q = model.q
    if Q1 is None:
        Q1 = q
    if Q2 is None:
        Q2 = Q1 + 1
    if (Q1, Q2) != (q, q + 1):
        return _smallest_integral_terms(model, Q1) - _smallest_integral_terms(model, Q2)
    f1 = 1
    f2 = 2 if model.D_app % 2 == 0 else 1
    dn = -model.d + q * f1 + Fraction((model.D_app - f2) * q, 2) + (f1 - f2)
    return int(dn)


def _smallest_integral_terms(model: OdeFormulaModel, Q: int) -> int:
    span = Q - model.q + 1
    for f in range(1, span + 1):
        if (model.D_app + f) % span == 0:
            return terms_required(model, Q, f)
    raise IntegralityError(f"no integral D at Q={Q}")


def minimal_degree(model: OdeFormulaModel) -> tuple[int, int]:
    """(Q, N) for the ODE of minimal degree D = d (f = 1)."""
    Q = model.q + model.D_app
    D = model.d
    return Q, (Q + 1) * (D + 1) - 1


# -- minimal-order descent ------------------------------------------------

@dataclass
class MinimalOperatorReport:
    operator: DiffOp | None
    order: int | None
    confirmed: bool
    model: OdeFormulaModel | None = None
    samples: list = dc_field(default_factory=list)
    note: str = ""


def minimal_operator(series: TruncatedSeries | Sequence[TruncatedSeries], strategy: str = "formula",
                     guard: int = DEFAULT_GUARD, max_order: int | None = None,
                     basis: str = THETA) -> DiffOp:
    """Minimal-order annihilator (normalized, D basis).

    Scans Q upward with the largest D the length allows until a guess
    succeeds.  With ``strategy="formula"`` the ODE formula is then fitted
    from nearby successful guesses to predict the minimal order q, which is
    confirmed by a guess at Q = q (or, if the series is too short for that,
    by a greatest common right divisor of the guessed operators).  With
    ``strategy="gcrd"`` only the divisor route is used.
    """
    report = minimal_operator_report(series, strategy, guard, max_order, basis)
    if report.operator is None:
        raise NeedMoreTermsError(report.note, model=report.model)
    return report.operator


def minimal_operator_report(series, strategy: str = "formula", guard: int = DEFAULT_GUARD,
                            max_order: int | None = None, basis: str = THETA) -> MinimalOperatorReport:
    from .factor import gcrd

    group = (series,) if isinstance(series, TruncatedSeries) else tuple(series)
    length = min(len(s) for s in group)
    if max_order is None:
        max_order = length
    first = None
    for Q in range(1, max_order + 1):
        D = max_degree_for(length, Q, guard)
        if D < 0:
            break
        res = guess_ode(GuessProblem(group, Q, D, basis, guard))
        if res.found:
            first = res
            break
    if first is None:
        raise NoOdeFoundError(f"no annihilator with order <= {max_order} within {length} terms")

    def certify(op: DiffOp) -> bool:
        return all(apply_operator(op, s).is_zero() for s in group)

    def via_gcrd(res: GuessResult) -> DiffOp:
        g = res.operators[0]
        for op in res.operators[1:]:
            g = gcrd(g, op)
            if g.order == 0:
                break
        return g.normalize()

    samples = [(first.Q, first.D, first.N_used)]
    candidate = via_gcrd(first)
    if strategy == "gcrd" or not certify(candidate) or candidate.order < 1:
        ok = certify(candidate) and candidate.order >= 1
        return MinimalOperatorReport(candidate if ok else None, candidate.order if ok else None,
                                     ok, None, samples, "gcrd of guessed operators")
    model = None
    if strategy == "formula" and len(group) == 1:
        samples = _collect_samples(group, first, basis, guard, length)
        try:
            model = fit_formula(samples)
        except ModelError as exc:
            log.debug("formula fit failed: %s", exc)
    if model is None or model.q >= candidate.order:
        # the divisor route already reached the predicted (or only known) order
        return MinimalOperatorReport(candidate, candidate.order, True, model, samples,
                                     "confirmed by gcrd" if model is None else "formula agrees")
    q = model.q
    Dq = model.d + model.D_app
    need = (q + 1) * (Dq + 1) + guard
    if Dq >= 0 and need <= length:
        res = guess_ode(GuessProblem(group, q, Dq, basis, guard))
        if res.found:
            op = via_gcrd(res)
            return MinimalOperatorReport(op, op.order, True, model, samples, "confirmed at Q=q")
    note = (f"minimal order {q} inferred from formula, unconfirmed; "
            f"{need} terms needed, {length} available")
    return MinimalOperatorReport(None, q, False, model, samples, note)


def _collect_samples(group, first: GuessResult, basis, guard, length):
    samples = [(first.Q, first.D, first.N_used)]
    trials = [(first.Q, first.D - 1), (first.Q + 1, max_degree_for(length, first.Q + 1, guard)),
              (first.Q + 2, max_degree_for(length, first.Q + 2, guard)),
              (first.Q + 1, max_degree_for(length, first.Q + 1, guard) - 1)]
    for Q, D in trials:
        if D < 0:
            continue
        res = guess_ode(GuessProblem(group, Q, D, basis, guard))
        if res.found:
            samples.append((Q, D, res.N_used))
    return samples
