"""Multi-prime exact reconstruction of differential operators.

Images of one operator modulo several primes are combined by CRT and
rational reconstruction.  The leading polynomial is rebuilt first from its
factor structure (rational roots and squarefree cofactors), which fixes
the integer scale; optional exponent targets then become exact linear
relations that determine some coefficients from the others.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, lcm, prod
from typing import Mapping, Sequence

import sympy

from .errors import BadPrimeError, ReconstructionError
from .fieldcore import GF, QQ, DensePoly
from .fieldcore.modular import crt_vector, rational_reconstruct, reconstruct_vector
from .local import apparent_check, as_point, local_exponents
from .operators import DX, DiffOp, falling_factorial_poly

log = logging.getLogger(__name__)

NORMALIZATION = "Dx basis, content removed, leading polynomial monic"


@dataclass
class OperatorResidues:
    """Images of one operator modulo distinct primes, in a shared normalization."""

    images: dict[int, DiffOp]
    basis: str = DX
    normalization: str = NORMALIZATION

    def __init__(self, images: Mapping[int, DiffOp] | Sequence[DiffOp]):
        if not isinstance(images, Mapping):
            images = {op.field.p: op for op in images}
        if not images:
            raise ValueError("need at least one residue image")
        self.basis = next(iter(images.values())).basis
        self.normalization = NORMALIZATION
        self.images = {}
        for p, op in sorted(images.items()):
            if getattr(op.field, "p", None) != p:
                raise ValueError(f"image for {p} is not over GF({p})")
            self.images[p] = op.to_dx().normalize()
        shapes = {p: self.shape(op) for p, op in self.images.items()}
        ref = max(set(shapes.values()), key=lambda s: (list(shapes.values()).count(s), s))
        bad = [p for p, s in shapes.items() if s != ref]
        if bad:
            raise BadPrimeError(f"images mod {','.join(map(str, bad))} have a different "
                                f"shape than the others (order/degrees {ref})")

    @staticmethod
    def shape(op: DiffOp) -> tuple[int, ...]:
        return tuple(c.degree() for c in op.coeffs)

    @property
    def primes(self) -> list[int]:
        return list(self.images)

    @property
    def modulus(self) -> int:
        return prod(self.images)

    @property
    def order(self) -> int:
        return next(iter(self.images.values())).order

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.shape(next(iter(self.images.values())))

    @classmethod
    def from_operator(cls, L: DiffOp, primes: Sequence[int]) -> "OperatorResidues":
        return cls({p: L.reduce(p) for p in primes})


@dataclass
class ExponentTarget:
    """Required local exponents at a point (number, "inf" or a minimal polynomial).

    ``apparent`` marks points that must also pass the no-logarithm test.
    """

    point: object
    exponents: Sequence[Fraction]
    apparent: bool = False


@dataclass
class ReconstructionResult:
    operator: DiffOp
    fixed: int
    reconstructed: int
    modulus: int
    certificates: list[str] = dc_field(default_factory=list)


# -- leading polynomial ------------------------------------------------------

def _sympy_poly(P: DensePoly, x):
    return sympy.Poly([int(c) for c in reversed(P.coeffs)], x, modulus=P.field.p)


def _sqf_groups(P: DensePoly) -> dict[int, DensePoly]:
    x = sympy.Symbol("x")
    out = {}
    for f, m in _sympy_poly(P, x).sqf_list()[1]:
        coeffs = [int(c) for c in reversed(f.all_coeffs())]
        out[m] = DensePoly(coeffs, P.field).monic()
    return out


def _roots(P: DensePoly) -> list[int]:
    x = sympy.Symbol("x")
    return [int(r) % P.field.p for r in _sympy_poly(P, x).ground_roots()]


def _reconstruct_poly(images: dict[int, DensePoly], what: str) -> DensePoly:
    primes = list(images)
    n = max(P.degree() for P in images.values()) + 1
    vecs = [[int(c) for c in images[p].coeffs] + [0] * (n - len(images[p].coeffs))
            for p in primes]
    vals, M = crt_vector(vecs, primes)
    try:
        coeffs = reconstruct_vector(vals, M)
    except ReconstructionError as exc:
        raise ReconstructionError(f"{what}: coefficient {exc.coefficient} does not "
                                  f"reconstruct with a {M.bit_length()}-bit modulus; add primes",
                                  coefficient=f"{what}[{exc.coefficient}]", modulus=M,
                                  bits_short=exc.bits_short) from None
    P = DensePoly(coeffs, QQ)
    for p, img in images.items():
        if P.change_field(GF(p)) != img:
            raise ReconstructionError(f"{what}: reconstruction disagrees with the image mod {p}",
                                      coefficient=what, modulus=M, bits_short=1)
    return P


def reconstruct_leading(residues: OperatorResidues) -> tuple[DensePoly, list[tuple[object, int]]]:
    """Exact monic leading polynomial and its factor list [(root or poly, multiplicity)]."""
    leads = {p: op.leading() for p, op in residues.images.items()}
    groups = {p: _sqf_groups(P) for p, P in leads.items()}
    pattern = {p: tuple(sorted((m, g.degree()) for m, g in gs.items())) for p, gs in groups.items()}
    ref = next(iter(pattern.values()))
    bad = [p for p, s in pattern.items() if s != ref]
    if bad:
        raise BadPrimeError(f"leading polynomial splits differently mod {','.join(map(str, bad))}")
    factors: list[tuple[object, int]] = []
    lead = DensePoly.constant(1, QQ)
    for m, _ in ref:
        per_prime = {p: groups[p][m] for p in groups}
        # rational roots shared by every prime
        p0 = residues.primes[0]
        candidates = set()
        for r in _roots(per_prime[p0]):
            try:
                candidates.add(rational_reconstruct(r, p0))
            except ReconstructionError:
                pass
        for r in sorted(candidates):
            if all(r.denominator % p and per_prime[p](GF(p)(r)) == GF(p).zero for p in per_prime):
                for p in per_prime:
                    lin = DensePoly([-GF(p)(r), GF(p).one], GF(p))
                    per_prime[p] = per_prime[p].exact_div(lin)
                factors.append((r, m))
                lead = lead * DensePoly([-r, Fraction(1)], QQ) ** m
        if max(P.degree() for P in per_prime.values()) > 0:
            rest = _reconstruct_poly(per_prime, f"leading factor of multiplicity {m}")
            factors.append((rest, m))
            lead = lead * rest ** m
    return lead, factors


# -- exponent conditions --------------------------------------------------------

class _Layout:
    """Index map for the unknown coefficients u[k][i] of sum_k c_k(x) D^k."""

    def __init__(self, degrees: Sequence[int]):
        self.degrees = list(degrees)
        self.offsets = []
        pos = 0
        for d in self.degrees:
            self.offsets.append(pos)
            pos += d + 1
        self.size = pos

    def index(self, k: int, i: int) -> int:
        return self.offsets[k] + i


def _ff_poly(k: int, negate: bool) -> DensePoly:
    P = falling_factorial_poly(k, QQ)
    if negate:
        P = DensePoly([c * (-1) ** j for j, c in enumerate(P.coeffs)], QQ)
    return P


def _multiplicity_in(lead: DensePoly, G: DensePoly) -> int:
    m = 0
    while lead.degree() >= G.degree():
        q, r = lead.divmod(G)
        if r:
            break
        lead, m = q, m + 1
    return m


def _power_coords(alpha_minpoly: DensePoly | None, a: Fraction | None, n: int) -> list[list[Fraction]]:
    """Coordinates of point^0..point^n (in the basis 1, t, ..., t^(deg-1) for algebraic points)."""
    if alpha_minpoly is None:
        return [[Fraction(a) ** j] for j in range(n + 1)]
    G = alpha_minpoly.monic()
    deg = G.degree()
    out, cur = [], DensePoly.constant(1, QQ)
    t = DensePoly.x(QQ)
    for _ in range(n + 1):
        c = list(cur.coeffs) + [Fraction(0)] * (deg - len(cur.coeffs))
        out.append(c)
        cur = (cur * t).divmod(G)[1]
    return out


def exponent_equations(layout: _Layout, order: int, lead: DensePoly,
                       target: ExponentTarget) -> list[list[Fraction]]:
    """Linear equations (coefficient rows, rhs 0) forcing the target exponents.

    Assumes the point is a regular singular point: the shift s is read off
    the known leading polynomial, lower Taylor coefficients are forced to
    vanish and the target exponents must be roots of the indicial polynomial.
    """
    rows: list[list[Fraction]] = []
    r = order
    pt = as_point(target.point)
    exps: dict[Fraction, int] = {}
    for e in target.exponents:
        e = Fraction(e)
        exps[e] = exps.get(e, 0) + 1

    if pt.kind == "infinity":
        s = lead.degree() - r
        # c_k has no x^j with j > k + s; indicial coefficient is [x^(k+s)] c_k
        for k in range(r):
            for i in range(k + s + 1, layout.degrees[k] + 1):
                row = [Fraction(0)] * layout.size
                row[layout.index(k, i)] = Fraction(1)
                rows.append(row)
        for e, mult in exps.items():
            for j in range(mult):
                row = [Fraction(0)] * layout.size
                for k in range(r + 1):
                    i = k + s
                    if 0 <= i <= layout.degrees[k]:
                        row[layout.index(k, i)] += _ff_poly(k, True).derivative(j)(e)
                rows.append(row)
        return rows

    if pt.kind == "algebraic":
        G = pt.minpoly.change_field(QQ) if pt.minpoly.field != QQ else pt.minpoly
        a = None
        mult_pt = _multiplicity_in(lead, G.monic())
        width = G.degree()
    else:
        G = None
        a = Fraction(pt.value)
        mult_pt = lead.taylor_shift(a).valuation() if lead(a) == 0 else 0
        width = 1
    s = mult_pt - r
    maxdeg = max(layout.degrees)
    powers = _power_coords(G, a, maxdeg)

    def taylor_rows(k: int, j: int) -> list[list[Fraction]]:
        """Rows (one per coordinate) for the j-th Taylor coefficient of c_k at the point."""
        out = [[Fraction(0)] * layout.size for _ in range(width)]
        for i in range(j, layout.degrees[k] + 1):
            c = comb(i, j)
            for w in range(width):
                out[w][layout.index(k, i)] += c * powers[i - j][w]
        return out

    for k in range(r):
        for j in range(0, min(k + s, layout.degrees[k] + 1)):
            rows.extend(taylor_rows(k, j))
    for e, mult in exps.items():
        for jd in range(mult):
            acc = [[Fraction(0)] * layout.size for _ in range(width)]
            for k in range(r + 1):
                j = k + s
                if j < 0 or j > layout.degrees[k]:
                    continue
                w_e = _ff_poly(k, False).derivative(jd)(e)
                if not w_e:
                    continue
                for w, trow in enumerate(taylor_rows(k, j)):
                    for col, v in enumerate(trow):
                        if v:
                            acc[w][col] += w_e * v
            rows.extend(acc)
    return rows


def _rref_fraction(rows: list[list[Fraction]], ncols: int):
    """Reduced row echelon form over Q of the augmented system [A | b]."""
    R = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(R)) if R[i][col]), None)
        if piv is None:
            continue
        R[rank], R[piv] = R[piv], R[rank]
        inv = 1 / R[rank][col]
        R[rank] = [v * inv for v in R[rank]]
        for i in range(len(R)):
            if i != rank and R[i][col]:
                f = R[i][col]
                R[i] = [vi - f * vr for vi, vr in zip(R[i], R[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(R):
            break
    for row in R[rank:]:
        if row[ncols]:
            raise ReconstructionError("exponent targets are inconsistent with each other",
                                      coefficient="constraints")
    return R[:rank], pivots


# -- main entry point ------------------------------------------------------------

def reconstruct_operator(residues: OperatorResidues | Mapping[int, DiffOp],
                         constraints: Sequence[ExponentTarget] = (),
                         check: Sequence[DiffOp] = ()) -> DiffOp:
    """Exact operator over Q from its images modulo several primes."""
    return reconstruct_operator_report(residues, constraints, check).operator


def reconstruct_operator_report(residues: OperatorResidues | Mapping[int, DiffOp],
                                constraints: Sequence[ExponentTarget] = (),
                                check: Sequence[DiffOp] = ()) -> ReconstructionResult:
    """Like reconstruct_operator, also reporting how many coefficients the
    constraints fixed and which certificates passed.

    ``check`` holds extra images (other primes) used only for verification.
    """
    if not isinstance(residues, OperatorResidues):
        residues = OperatorResidues(residues)
    primes = residues.primes
    M = residues.modulus
    r = residues.order
    layout = _Layout(residues.degrees)
    lead_monic, factors = reconstruct_leading(residues)
    scale = Fraction(lead_monic.denominator_lcm())
    F = lead_monic.scale(scale)
    content = F.integer_content()
    F = F.scale(Fraction(1, content))
    kappa = scale / content
    log.info("leading polynomial rebuilt: %s", ", ".join(
        f"({f})^{m}" if isinstance(f, DensePoly) else f"(x-{f})^{m}" for f, m in factors))

    known = _known_factors(residues, factors, kappa)
    ulayout = _Layout([layout.degrees[k] - known[k].degree() for k in range(r + 1)])

    # Scaled integer residues of the cofactors c_k / known_k.
    scaled: dict[int, list[int]] = {}
    for p, op in residues.images.items():
        fp, kp = GF(p), GF(p)(kappa)
        vec = [0] * ulayout.size
        for k, c in enumerate(op.coeffs):
            u = c.scale(kp).exact_div(known[k].change_field(fp))
            for i, v in enumerate(u.coeffs):
                vec[ulayout.index(k, i)] = int(v)
        scaled[p] = vec

    # Known: the leading cofactor (a constant).  Constraints add linear relations.
    lead_u = F.exact_div(known[r])
    rows = []
    for i in range(ulayout.degrees[r] + 1):
        row = [Fraction(0)] * (ulayout.size + 1)
        row[ulayout.index(r, i)] = Fraction(1)
        row[-1] = Fraction(lead_u.coeffs[i]) if i < len(lead_u.coeffs) else Fraction(0)
        rows.append(row)
    for tgt in constraints:
        for eq in exponent_equations(layout, r, F, tgt):
            rows.append(_pull_back(eq, layout, ulayout, known) + [Fraction(0)])
    # Leading unknowns first, then higher-order coefficients first.
    order_cols = list(range(ulayout.offsets[r], ulayout.size))
    for k in range(r - 1, -1, -1):
        order_cols += list(range(ulayout.offsets[k], ulayout.offsets[k] + ulayout.degrees[k] + 1))
    perm_rows = [[row[c] for c in order_cols] + [row[-1]] for row in rows]
    R, piv = _rref_fraction(perm_rows, ulayout.size)
    pivot_vars = {order_cols[pc]: R[i] for i, pc in enumerate(piv)}
    free = [c for c in range(ulayout.size) if c not in pivot_vars]
    n_fixed = len(pivot_vars) - (ulayout.degrees[r] + 1)
    log.info("%d coefficients fixed by constraints, %d to reconstruct", n_fixed, len(free))

    images = [[scaled[p][c] for c in free] for p in primes]
    vals, _ = crt_vector(images, primes) if free else ([], M)
    half = M // 2
    values: dict[int, Fraction] = {}
    for c, v in zip(free, vals):
        v %= M
        values[c] = Fraction(v - M if v > half else v)
    col_pos = {c: j for j, c in enumerate(order_cols)}
    for c, row in pivot_vars.items():
        val = row[-1]
        for f in free:
            coef = row[col_pos[f]]
            if coef:
                val -= coef * values[f]
        values[c] = val

    coeffs = []
    for k in range(r + 1):
        u = DensePoly([values[ulayout.index(k, i)] for i in range(ulayout.degrees[k] + 1)], QQ)
        coeffs.append(u * known[k])
    L = DiffOp(coeffs, DX, QQ)
    certs: list[str] = []

    # (i) agreement with every residue image (and extra check images)
    for p, op in list(residues.images.items()) + [(op.field.p, op.to_dx().normalize()) for op in check]:
        try:
            red = L.reduce(p).normalize()
        except BadPrimeError:
            red = None
        if red is None or red.coeffs != op.coeffs:
            bad = _first_mismatch(L, op, p, layout)
            raise ReconstructionError(
                f"reconstructed operator disagrees with the image mod {p} at {bad}; "
                f"the modulus product ({M.bit_length()} bits) is too small",
                coefficient=bad, modulus=M, bits_short=1)
    certs.append(f"reduces to the given image modulo {len(primes) + len(check)} primes")
    # (ii) exponent targets, (iii) apparent singularities
    for tgt in constraints:
        rep = local_exponents(L, tgt.point)
        want = sorted(Fraction(e) for e in tgt.exponents)
        if rep.multiset() != want or rep.unlifted_degree:
            raise ReconstructionError(
                f"exponents at {rep.point.label()} are {rep.multiset()}, expected {want}",
                coefficient=f"exponents at {rep.point.label()}", modulus=M, bits_short=1)
        certs.append(f"exponents at {rep.point.label()} match")
        if tgt.apparent:
            cert = apparent_check(L, tgt.point)
            if not cert.passed:
                raise ReconstructionError(
                    f"point {cert.point.label()} is not apparent: {'; '.join(cert.checks)}",
                    coefficient=f"apparent {cert.point.label()}", modulus=M, bits_short=1)
            certs.append(f"no logarithms at {cert.point.label()}")
    if residues.basis != DX:
        L = L.in_basis(residues.basis)
    return ReconstructionResult(L, n_fixed, len(free), M, certs)


def _known_factors(residues: OperatorResidues, factors, kappa) -> list[DensePoly]:
    """Integer polynomials known to divide each coefficient.

    At a root of the leading polynomial with multiplicity m, a regular
    singular point forces c_k to vanish to order m - (order - k).  Each
    such power is kept only if it divides the images for every prime.
    """
    r = residues.order
    prims = []
    for f, m in factors:
        if isinstance(f, DensePoly):
            P = f.scale(Fraction(f.denominator_lcm()))
        else:
            P = DensePoly([-f.numerator, f.denominator], QQ)
        P = P.scale(Fraction(1, P.integer_content()))
        if P.lc() < 0:
            P = P.scale(-1)
        prims.append((P, m))
    known = []
    for k in range(r + 1):
        K = DensePoly.constant(1, QQ)
        for P, m in prims:
            j = max(0, m - (r - k))
            while j > 0:
                cand = K * P ** j
                ok = True
                for p, op in residues.images.items():
                    fp = GF(p)
                    try:
                        c = cand.change_field(fp)
                    except BadPrimeError:
                        ok = False
                        break
                    if c.degree() != cand.degree() or not c.divides(op.coeffs[k]):
                        ok = False
                        break
                if ok:
                    K = cand
                    break
                j -= 1
        known.append(K)
    return known


def _pull_back(row: list[Fraction], layout: _Layout, ulayout: _Layout,
               known: list[DensePoly]) -> list[Fraction]:
    """Rewrite a linear form in the c-coefficients in terms of the cofactor coefficients."""
    out = [Fraction(0)] * ulayout.size
    for k, K in enumerate(known):
        for j in range(ulayout.degrees[k] + 1):
            acc = Fraction(0)
            for t, kc in enumerate(K.coeffs):
                i = j + t
                if i <= layout.degrees[k]:
                    acc += kc * row[layout.index(k, i)]
            out[ulayout.index(k, j)] = acc
    return out


def _first_mismatch(L: DiffOp, op: DiffOp, p: int, layout: _Layout) -> str:
    try:
        red = L.reduce(p).normalize()
    except BadPrimeError:
        return "leading polynomial"
    for k in range(len(layout.degrees)):
        if k >= len(red.coeffs) or red.coeffs[k] != op.coeffs[k]:
            return f"coeff {k}"
    return "leading polynomial"
