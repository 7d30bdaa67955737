"""Chinese remaindering and rational number reconstruction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm, prod
from typing import Iterable, Sequence

from ..errors import ReconstructionError


@dataclass(frozen=True)
class ResidueSystem:
    """An integer known modulo several pairwise coprime moduli."""

    residues: tuple[tuple[int, int], ...]

    def __init__(self, residues: Iterable[tuple[int, int]]):
        pairs = tuple((int(r) % int(m), int(m)) for r, m in residues)
        moduli = [m for _, m in pairs]
        if len(set(moduli)) != len(moduli):
            raise ValueError("moduli must be pairwise distinct")
        for i, a in enumerate(moduli):
            for b in moduli[i + 1:]:
                if gcd(a, b) != 1:
                    raise ValueError(f"moduli {a} and {b} are not coprime")
        object.__setattr__(self, "residues", pairs)

    @property
    def modulus(self) -> int:
        return prod(m for _, m in self.residues)

    def combine(self) -> tuple[int, int]:
        return crt_combine(self)

    def reconstruct(self, **bounds) -> Fraction:
        value, modulus = crt_combine(self)
        return rational_reconstruct(value, modulus, **bounds)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine x = r1 (mod m1), x = r2 (mod m2) for coprime moduli."""
    if gcd(m1, m2) != 1:
        raise ValueError(f"moduli {m1} and {m2} are not coprime")
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return (r1 + m1 * t) % (m1 * m2), m1 * m2


def crt_combine(residues: ResidueSystem | Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Return (x, M) with 0 <= x < M congruent to every residue."""
    if not isinstance(residues, ResidueSystem):
        residues = ResidueSystem(residues)
    if not residues.residues:
        raise ValueError("empty residue system")
    x, m = 0, 1
    for r, mi in residues.residues:
        x, m = crt_pair(x, m, r, mi)
    return x, m


def crt_vector(images: Sequence[Sequence[int]], moduli: Sequence[int]) -> tuple[list[int], int]:
    """Coefficient-wise CRT of equally long residue vectors."""
    m = prod(moduli)
    # Precompute the Lagrange-style basis: e_i = 1 mod m_i, 0 mod m_j.
    basis = []
    for mi in moduli:
        other = m // mi
        basis.append(other * pow(other, -1, mi))
    out = []
    for k in range(len(images[0])):
        out.append(sum(b * img[k] for b, img in zip(basis, images)) % m)
    return out, m


def default_bound(modulus: int) -> int:
    """Symmetric bound sqrt(M/2), the largest N with 2*N*N < M."""
    n = isqrt(modulus // 2)
    while 2 * n * n >= modulus and n > 0:
        n -= 1
    return n


def rational_reconstruct(value: int, modulus: int, num_bound: int | None = None,
                         den_bound: int | None = None, integer: bool = False) -> Fraction:
    """Recover n/d from value = n/d (mod modulus) with |n| <= N, 0 < d <= D.

    Defaults to N = D = sqrt(M/2).  With ``integer=True`` the denominator
    bound is 1 and N = (M-1)/2, i.e. the symmetric integer representative.
    The answer is unique whenever 2*N*D < M.
    """
    if modulus < 2:
        raise ValueError("modulus must exceed 1")
    value %= modulus
    if integer:
        den_bound = 1
        if num_bound is None:
            num_bound = (modulus - 1) // 2
    if num_bound is None and den_bound is None:
        num_bound = den_bound = default_bound(modulus)
    elif num_bound is None:
        num_bound = (modulus - 1) // (2 * den_bound)
    elif den_bound is None:
        den_bound = (modulus - 1) // (2 * max(num_bound, 1))
    if 2 * num_bound * den_bound >= modulus:
        raise ValueError("bounds violate 2*N*D < M")
    # Half-extended Euclid on (M, value) tracking only the cofactor of value.
    r0, r1 = modulus, value
    t0, t1 = 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > den_bound or gcd(r1, abs(t1)) != 1:
        raise ReconstructionError(
            f"no rational with |num| <= {num_bound}, den <= {den_bound} matches "
            f"{value} mod {modulus}", modulus=modulus)
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Fraction(r1, t1)


def maximal_quotient_reconstruct(value: int, modulus: int, margin_bits: int = 20) -> Fraction:
    """Maximal-quotient rational reconstruction.

    Picks the Euclidean step with the largest quotient and accepts it when
    that quotient exceeds 2**margin_bits.  Useful when numerator and
    denominator sizes are very unbalanced.
    """
    value %= modulus
    if value == 0:
        return Fraction(0)
    r0, r1 = modulus, value
    t0, t1 = 0, 1
    best_q, best = 0, None
    while r1:
        q = r0 // r1
        if q > best_q:
            best_q, best = q, (r1, t1)
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if best is None or best_q < (1 << margin_bits):
        raise ReconstructionError("no dominant quotient: not enough modulus",
                                  modulus=modulus)
    n, d = best
    if d < 0:
        n, d = -n, -d
    if gcd(n, d) != 1:
        raise ReconstructionError("reconstruction candidate not in lowest terms",
                                  modulus=modulus)
    return Fraction(n, d)


def reconstruct_vector(values: Sequence[int], modulus: int,
                       num_bound: int | None = None, den_bound: int | None = None,
                       start_denominator: int = 1, integer_tail: bool = False,
                       known: dict[int, Fraction] | None = None) -> list[Fraction]:
    """Reconstruct a vector of rationals sharing most of their denominator.

    Each entry is first multiplied by the running common denominator, so
    only the part of its denominator not seen yet has to be recovered.
    Passes repeat until no further entry succeeds.  With ``integer_tail``
    the remaining entries are then taken as symmetric integer representatives
    divided by the common denominator; such values are not self-certifying
    and must be checked by the caller.
    """
    if num_bound is None and den_bound is None:
        num_bound = den_bound = default_bound(modulus)
    elif num_bound is None:
        num_bound = (modulus - 1) // (2 * den_bound)
    elif den_bound is None:
        den_bound = (modulus - 1) // (2 * max(num_bound, 1))
    common = start_denominator
    out: list[Fraction | None] = [None] * len(values)
    for i, v in (known or {}).items():
        out[i] = Fraction(v)
        common = lcm(common, out[i].denominator)
    pending = [i for i in range(len(values)) if out[i] is None]
    pending.sort(key=lambda i: _sym_size(values[i], modulus))
    while pending:
        still = []
        for i in pending:
            v = values[i] * common % modulus
            try:
                r = rational_reconstruct(v, modulus, num_bound, den_bound)
            except ReconstructionError:
                still.append(i)
                continue
            out[i] = r / common
            common = lcm(common, out[i].denominator)
        if len(still) == len(pending):
            break
        pending = still
    if pending and integer_tail:
        half = modulus // 2
        for i in pending:
            v = values[i] * common % modulus
            if v > half:
                v -= modulus
            out[i] = Fraction(v, common)
        pending = []
    if pending:
        # The true size of a failed entry is unknown; one more bit is the
        # only shortfall that can be asserted.
        raise ReconstructionError(
            f"{len(pending)} entries failed vector reconstruction (first index {pending[0]}); "
            f"modulus has {modulus.bit_length()} bits",
            coefficient=pending[0], modulus=modulus, bits_short=1)
    return out  # type: ignore[return-value]


def _sym_size(v: int, m: int) -> int:
    v %= m
    return min(v, m - v)
