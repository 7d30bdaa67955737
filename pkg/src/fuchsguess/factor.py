"""Noncommutative operator algebra: division, gcrd, lclm, symmetric powers,
factorization by exponent probes and K/E ansatz fitting."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import (DegenerateExponentError, NeedMoreTermsError, NoOdeFoundError,
                     NotAnExponentError, ParseError)
from .fieldcore import DensePoly, RatFunc
from .fieldcore.linalg import nullspace, rref_generic, solve
from .guess import DEFAULT_GUARD, minimal_operator_report, optimal_scan
from .local import as_point, formal_solutions, invert_operator, translate_operator
from .operators import DX, DiffOp, compose
from .series import TruncatedSeries, apply_operator, series_from_operator

log = logging.getLogger(__name__)


# -- division ------------------------------------------------------------

def right_pseudo_divide(A: DiffOp, B: DiffOp) -> tuple[DensePoly, DiffOp, DiffOp]:
    """Return (lam, Q, R) with lam*A = Q*B + R and order(R) < order(B).

    lam is a product of powers of the leading coefficient of B (reduced by
    gcds at each step), so all three results have polynomial coefficients.
    """
    if B.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    A, B = A.to_dx(), B.to_dx()
    f = A.field
    lam = DensePoly.constant(1, f)
    Q = DiffOp([], DX, f)
    R = A
    b = B.leading()
    while not R.is_zero() and R.order >= B.order:
        k = R.order - B.order
        r = R.leading()
        g = b.gcd(r)
        bm, rm = b.exact_div(g), r.exact_div(g)
        shifted = compose(DiffOp([DensePoly((), f)] * k + [rm], DX, f), B)
        R = R.left_scale(bm) - shifted
        Q = Q.left_scale(bm) + DiffOp([DensePoly((), f)] * k + [rm], DX, f)
        lam = lam * bm
        # drop the (now cancelled) leading term exactly
        if not R.is_zero() and R.order > B.order + k - 1 and R.leading().is_zero():
            R = DiffOp(R.coeffs[:-1], DX, f)
    return lam, Q, R


def right_divide(A: DiffOp, B: DiffOp) -> tuple[DiffOp, DiffOp]:
    """Quotient and remainder of right division over the rational-function field.

    Both are returned as normalized polynomial representatives (the exact
    identity lam*A = Q*B + R is available from right_pseudo_divide); the
    remainder is zero exactly when B is a right factor of A.
    """
    _, Q, R = right_pseudo_divide(A, B)
    return Q.normalize(), R.normalize()


def gcrd(A: DiffOp, B: DiffOp) -> DiffOp:
    """Greatest common right divisor (normalized) by the Euclidean algorithm."""
    A, B = A.to_dx().normalize(), B.to_dx().normalize()
    if A.order < B.order:
        A, B = B, A
    while not B.is_zero():
        _, _, R = right_pseudo_divide(A, B)
        A, B = B, R.normalize()
    return A


def op_multiply(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B)


# -- cyclic-vector machinery ----------------------------------------------

class _Reducer:
    """Computes D applied to K(x)-combinations of y, y', ... modulo L."""

    def __init__(self, L: DiffOp):
        L = L.to_dx()
        self.r = L.order
        f = L.field
        lead = L.leading()
        self.tail = [RatFunc(-c, lead) for c in L.coeffs[:-1]]
        self.field = f

    def zero(self):
        return RatFunc(DensePoly((), self.field))


def _rf_const(c, field) -> RatFunc:
    return RatFunc(DensePoly.constant(c, field))


def _first_dependency(vectors_iter, field, max_len: int):
    """Collect vectors until the first K(x)-linear dependency; return its coefficients."""
    vecs = []
    for v in vectors_iter:
        vecs.append(v)
        if len(vecs) > max_len + 1:
            break
        cols = vecs
        rows = [[c[i] for c in cols] for i in range(len(cols[0]))]
        rref, piv = rref_generic(rows)
        if len(piv) < len(cols):
            ns = _ratfunc_nullspace(rref, piv, len(cols), field)
            return ns
    raise RuntimeError("no dependency found within the expected dimension")


def _ratfunc_nullspace(rref, piv, ncols, field):
    free = [c for c in range(ncols) if c not in piv]
    fcol = free[0]
    v = [RatFunc(DensePoly((), field)) for _ in range(ncols)]
    v[fcol] = _rf_const(1, field)
    for i, pc in enumerate(piv):
        v[pc] = -rref[i][fcol]
    return v


def _operator_from_ratfuncs(coeffs: Sequence[RatFunc], field) -> DiffOp:
    common = DensePoly.constant(1, field)
    for c in coeffs:
        g = common.gcd(c.den)
        common = common * c.den.exact_div(g)
    out = [c.num * common.exact_div(c.den) for c in coeffs]
    return DiffOp(out, DX, field).normalize()


def lclm(*ops: DiffOp) -> DiffOp:
    """Least common left multiple of one or more operators (normalized, D basis).

    Tracks 1, D, D^2, ... modulo every operand simultaneously and stops at
    the first K(x)-linear dependency among the stacked remainders.
    """
    if not ops:
        raise ValueError("lclm of no operators")
    ops = [op.to_dx() for op in ops]
    field = ops[0].field
    reducers = [_Reducer(op) for op in ops]
    zero = RatFunc(DensePoly((), field))
    one = _rf_const(1, field)

    def gen():
        state = []
        for red in reducers:
            comp = [zero] * red.r
            if red.r:
                comp[0] = one
            state.append(comp)
        while True:
            yield [c for comp in state for c in comp]
            state = [_derive_linear(comp, red) for comp, red in zip(state, reducers)]

    total = sum(r.r for r in reducers)
    coeffs = _first_dependency(gen(), field, total)
    return _operator_from_ratfuncs(coeffs, field)


def _derive_linear(comp: list, red: _Reducer) -> list:
    """D * sum_j comp[j] D^j reduced modulo L."""
    r = red.r
    out = [c.derivative() for c in comp]
    top = comp[r - 1]
    for j in range(r - 1):
        out[j + 1] = out[j + 1] + comp[j]
    if top:
        for j in range(r):
            out[j] = out[j] + top * red.tail[j]
    return out


def symmetric_power(L: DiffOp, m: int) -> DiffOp:
    """Minimal operator annihilating all m-fold products of solutions of L."""
    if m < 1:
        raise ValueError("symmetric power needs m >= 1")
    L = L.to_dx()
    if m == 1:
        return L.normalize()
    red = _Reducer(L)
    r = red.r
    field = L.field
    monos = list(combinations_with_replacement(range(r), m))
    # represent monomials as exponent tuples
    def key(combo):
        e = [0] * r
        for j in combo:
            e[j] += 1
        return tuple(e)

    basis = [key(c) for c in monos]
    index = {b: i for i, b in enumerate(basis)}
    zero = RatFunc(DensePoly((), field))

    def derive(vec):
        out = [c.derivative() if c else zero for c in vec]
        for mono, c in zip(basis, vec):
            if not c:
                continue
            for j in range(r):
                a = mono[j]
                if not a:
                    continue
                lowered = list(mono)
                lowered[j] -= 1
                if j + 1 < r:
                    lowered[j + 1] += 1
                    t = tuple(lowered)
                    out[index[t]] = out[index[t]] + c * a
                else:
                    # Y_r = sum_i tail[i] Y_i
                    for i in range(r):
                        if red.tail[i]:
                            lw = list(lowered)
                            lw[i] += 1
                            t = tuple(lw)
                            out[index[t]] = out[index[t]] + c * a * red.tail[i]
        return out

    def gen():
        v = [zero] * len(basis)
        v[index[key((0,) * m)]] = _rf_const(1, field)
        while True:
            yield v
            v = derive(v)

    coeffs = _first_dependency(gen(), field, len(basis))
    return _operator_from_ratfuncs(coeffs, field)


# -- factorization by exponent probes --------------------------------------

@dataclass
class ProbeResult:
    status: str  # "factor" | "full" | "inconclusive"
    factor: DiffOp | None = None
    terms_used: int = 0
    terms_needed: int | None = None
    note: str = ""


def factor_by_exponent(L: DiffOp, point, rho, budget: int = 2000,
                       guard: int = DEFAULT_GUARD, start: int = 64) -> ProbeResult:
    """Right factor of L annihilating its local solution x^rho (1 + ...).

    The series is generated with lengths doubling from ``start`` up to
    ``budget``; the first length at which a minimal annihilator is found
    and certified ends the probe.
    """
    pt = as_point(point)
    if pt.kind == "algebraic":
        raise ValueError("exponent probes at algebraic points are not supported")
    if pt.kind == "infinity":
        Lt = invert_operator(L).to_dx()
    elif pt.value == 0:
        Lt = L.to_dx()
    else:
        Lt = translate_operator(L, L.field(pt.value))
    Lt = Lt.normalize()
    rho = Fraction(rho)
    n = min(start, budget)
    last_note, estimate = "", None
    while True:
        s = _branch_series(Lt, rho, n)
        try:
            rep = minimal_operator_report(s, "formula", guard)
        except NoOdeFoundError as exc:
            rep, last_note = None, str(exc)
        if rep is not None and rep.operator is not None:
            R = rep.operator
            if R.order >= Lt.order:
                return ProbeResult("full", L.to_dx().normalize(), n, None,
                                   "probe gives rise to the full operator")
            _, rem = right_divide(Lt, R)
            if rem.is_zero():
                back = _move_back(R, pt, L.field)
                return ProbeResult("factor", back, n, None, rep.note)
            last_note = "guessed operator does not right-divide the input"
        elif rep is not None:
            last_note = rep.note
            if rep.model is not None:
                estimate = optimal_scan(rep.model).terms + guard
        if n >= budget:
            return ProbeResult("inconclusive", None, n, estimate, last_note)
        n = min(2 * n, budget)


def _branch_series(L: DiffOp, rho: Fraction, n: int) -> TruncatedSeries:
    """Series of the x^rho branch; resonant exponents go through the Frobenius basis."""
    try:
        return series_from_operator(L, rho, n)
    except DegenerateExponentError:
        sols = formal_solutions(L, 0, n)
    for sol in sols.solutions:
        if sol.start == rho and sol.max_log == 0:
            return sol.series(0, L.field).truncate(n)
    raise DegenerateExponentError(f"the x^{rho} branch carries logarithms; no power-series probe")


def _move_back(R: DiffOp, pt, field) -> DiffOp:
    if pt.kind == "infinity":
        return invert_operator(R).to_dx().normalize()
    if pt.value == 0:
        return R.normalize()
    return translate_operator(R, -field(pt.value)).normalize()


def sequential_annihilation(factors: Sequence[DiffOp], s: TruncatedSeries) -> TruncatedSeries:
    """Apply the factors of A1*A2*...*Ak right to left; zero for solutions."""
    out = s
    for op in reversed(factors):
        out = apply_operator(op, out)
    return out


# -- ansatz fitting ---------------------------------------------------------

def ansatz_fit(target: TruncatedSeries, k_series: TruncatedSeries, e_series: TruncatedSeries,
               m: int, max_degree: int | Sequence[int],
               prefactor: Sequence[tuple[DensePoly, int]] = ()) -> list[DensePoly] | None:
    """Polynomials P_i (deg <= max_degree) with target = prefactor * sum P_i K^(m-i) E^i.

    ``prefactor`` is a product of (polynomial, exponent) pairs.  Returns the
    unique solution, or None when the system is inconsistent.
    """
    field = target.field
    degs = [max_degree] * (m + 1) if isinstance(max_degree, int) else list(max_degree)
    T = target
    for poly, e in prefactor:
        v = poly.valuation()
        if v and poly.degree() == v:  # pure power of x
            T = T.shift(-v * e).scale(field.one / poly.lc() ** e)
            continue
        ps = TruncatedSeries(list(poly.coeffs) or [field.zero], field)
        if e < 0:
            for _ in range(-e):
                T = T * ps
        else:
            inv = ps.reciprocal()
            for _ in range(e):
                T = T * inv
    if T.ramification != 1 or T.offset.denominator != 1 or T.offset < 0:
        raise ValueError("after removing the prefactor the target must be a power series")
    T = TruncatedSeries([field.zero] * int(T.offset) + list(T.coeffs), field, 0, 1, T.var,
                        normalize=False)
    n = len(T)
    products = []
    K, E = k_series.truncate(min(n, len(k_series))), e_series.truncate(min(n, len(e_series)))
    n = min(n, len(K), len(E))
    for i in range(m + 1):
        term = None
        for _ in range(m - i):
            term = K if term is None else term * K
        for _ in range(i):
            term = E if term is None else term * E
        products.append(term.coeffs[:n])
    unknowns = sum(d + 1 for d in degs)
    if n < unknowns:
        raise NeedMoreTermsError(f"ansatz needs at least {unknowns} terms, have {n}", unknowns, n)
    rows = []
    for t in range(n):
        row = []
        for i in range(m + 1):
            for j in range(degs[i] + 1):
                row.append(products[i][t - j] if t - j >= 0 else field.zero)
        rows.append(row)
    sol = solve(rows, list(T.coeffs[:n]), field)
    if sol is None:
        return None
    if nullspace(rows, field):
        raise NeedMoreTermsError("ansatz system is underdetermined", unknowns, n)
    out, pos = [], 0
    for i in range(m + 1):
        out.append(DensePoly(sol[pos:pos + degs[i] + 1], field))
        pos += degs[i] + 1
    return out


# -- factorization trees ------------------------------------------------------

@dataclass
class FactorNode:
    role: str  # "product" | "dsum" | "leaf"
    label: str
    operator: DiffOp | None = None
    children: list["FactorNode"] = dc_field(default_factory=list)
    order: int | None = None

    def assemble(self) -> DiffOp:
        if self.role == "leaf":
            if self.operator is None:
                raise ValueError(f"leaf {self.label} has no operator attached")
            return self.operator
        parts = [c.assemble() for c in self.children]
        if self.role == "product":
            out = parts[0]
            for p in parts[1:]:
                out = out * p
            return out.normalize()
        return lclm(*parts)

    def node_order(self) -> int | None:
        if self.operator is not None:
            return self.operator.order
        if self.order is not None:
            return self.order
        orders = [c.node_order() for c in self.children]
        if any(o is None for o in orders):
            return None
        if self.role == "product":
            return sum(orders)
        try:
            return self.assemble().order
        except ValueError:
            return None

    def verify(self, root: DiffOp) -> bool:
        return self.assemble().equivalent(root)

    def attach(self, operators: dict[str, DiffOp]) -> "FactorNode":
        if self.label in operators:
            self.operator = operators[self.label]
        for c in self.children:
            c.attach(operators)
        return self

    def to_text(self, indent: int = 0) -> str:
        order = self.node_order()
        line = "  " * indent + f"{self.role} {self.label}"
        if order is not None:
            line += f" order={order}"
        lines = [line] + [c.to_text(indent + 1).rstrip("\n") for c in self.children]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, path: str | None = None) -> "FactorNode":
        stack: list[tuple[int, FactorNode]] = []
        root = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip():
                continue
            stripped = raw.lstrip(" ")
            width = len(raw) - len(stripped)
            if width % 2:
                raise ParseError("indentation must use two spaces per level", lineno, path)
            depth = width // 2
            parts = stripped.split()
            if len(parts) < 2 or parts[0] not in ("product", "dsum", "leaf"):
                raise ParseError(f"expected '<product|dsum|leaf> <label>', got {stripped!r}",
                                 lineno, path)
            order = None
            for extra in parts[2:]:
                if extra.startswith("order="):
                    order = int(extra[6:])
                else:
                    raise ParseError(f"unknown attribute {extra!r}", lineno, path)
            node = cls(parts[0], parts[1], None, [], order)
            while stack and stack[-1][0] >= depth:
                stack.pop()
            if not stack:
                if root is not None or depth:
                    raise ParseError("tree must have a single root at depth 0", lineno, path)
                root = node
            else:
                if stack[-1][0] != depth - 1:
                    raise ParseError("indentation skips a level", lineno, path)
                parent = stack[-1][1]
                if parent.role == "leaf":
                    raise ParseError("leaf nodes cannot have children", lineno, path)
                parent.children.append(node)
            stack.append((depth, node))
        if root is None:
            raise ParseError("empty factorization tree", None, path)
        return root


FactorizationTree = FactorNode
