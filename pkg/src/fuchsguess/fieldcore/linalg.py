"""Row reduction and nullspaces over prime fields, Q and generic fields.

The prime-field path works on residue arrays: numpy int64 for p < 2**31
(products fit in 63 bits) and Python-object arrays for larger primes.
Pivoting always takes the first nonzero entry, so the echelon form and the
nullspace basis are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CoefficientDomainError, EmptyInputError
from .fields import GF, QQ, FieldElement, PrimeField

INT64_PRIME_LIMIT = 1 << 31


def _residue_array(rows, p: int) -> np.ndarray:
    dtype = np.int64 if p < INT64_PRIME_LIMIT else object
    data = []
    for row in rows:
        out = []
        for v in row:
            if type(v) is FieldElement:
                if v.modulus != p:
                    raise CoefficientDomainError(f"entry mod {v.modulus} in a matrix mod {p}")
                out.append(v.residue)
            else:
                out.append(GF(p)(v).residue)
        data.append(out)
    return np.array(data, dtype=dtype).reshape(len(data), -1 if data else 0)


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a residue array; returns (R, pivot columns)."""
    a = np.array(a, dtype=np.int64 if p < INT64_PRIME_LIMIT else object) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            factors = a[others, c].reshape(-1, 1)
            a[np.ix_(others, np.arange(c, ncols))] = (
                a[np.ix_(others, np.arange(c, ncols))] - factors * a[r, c:]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _nullspace_from_rref(rref, pivots: list[int], ncols: int, zero, one, neg) -> list[list]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = one
        for i, pc in enumerate(pivots):
            v[pc] = neg(rref[i][fcol])
        basis.append(v)
    return basis


def nullspace_mod_p(a, p: int) -> np.ndarray:
    """Right nullspace of a residue array; rows of the result are basis vectors."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[1] == 0:
        raise EmptyInputError("nullspace of an empty matrix")
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64 if p < INT64_PRIME_LIMIT else object)
    r, pivots = rref_mod_p(a, p)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    out = np.zeros((len(free), ncols), dtype=r.dtype)
    for j, fcol in enumerate(free):
        out[j, fcol] = 1
        for i, pc in enumerate(pivots):
            out[j, pc] = (-r[i, fcol]) % p
    return out


def row_profile_mod_p(a, p: int) -> list[int]:
    """Indices of rows that increase the rank when rows are taken in order."""
    a = np.asarray(a)
    if a.shape[0] == 0:
        return []
    _, pivots = rref_mod_p(a.T.copy(), p)
    return pivots


def rref_generic(rows: Sequence[Sequence], zero=None) -> tuple[list[list], list[int]]:
    """RREF over any exact field whose elements support + - * / and truth tests."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        a[r] = [x / piv if x else x for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                row_r = a[r]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(matrix, field=None) -> list[list]:
    """Basis of the right nullspace of ``matrix`` (list of rows).

    The field is inferred from the entries when not given: FieldElement
    entries select the prime-field path; ints/Fractions select Q.  Any other
    field-like entries (rational functions, algebraic numbers) use generic
    elimination.  Each basis vector has a 1 in a distinct free column.
    """
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        raise EmptyInputError("nullspace of an empty matrix")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if field is None:
        field = _infer_field(rows)
    if isinstance(field, PrimeField):
        p = field.p
        basis = nullspace_mod_p(_residue_array(rows, p), p)
        mk = FieldElement._raw
        return [[mk(int(v), p) for v in vec] for vec in basis]
    if field is QQ:
        rows = [[Fraction(v) for v in r] for r in rows]
        zero, one = Fraction(0), Fraction(1)
    else:
        rows = [[field(v) for v in r] for r in rows]
        zero, one = field.zero, field.one
    rref, pivots = rref_generic(rows)
    return _nullspace_from_rref(rref, pivots, ncols, zero, one, lambda v: -v)


def rank(matrix, field=None) -> int:
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    if field is None:
        field = _infer_field(rows)
    if isinstance(field, PrimeField):
        _, piv = rref_mod_p(_residue_array(rows, field.p), field.p)
        return len(piv)
    _, piv = rref_generic([[field(v) for v in r] for r in rows])
    return len(piv)


def solve(matrix, rhs, field=None) -> list | None:
    """One solution of matrix * v = rhs, or None when inconsistent."""
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    if field is None:
        field = _infer_field(rows)
    ncols = len(rows[0]) - 1
    if isinstance(field, PrimeField):
        p = field.p
        r, piv = rref_mod_p(_residue_array(rows, p), p)
        if ncols in piv:
            return None
        v = [field.zero] * ncols
        for i, c in enumerate(piv):
            v[c] = field(int(r[i, ncols]))
        return v
    r, piv = rref_generic([[field(x) for x in row] for row in rows])
    if ncols in piv:
        return None
    v = [field.zero] * ncols
    for i, c in enumerate(piv):
        v[c] = r[i][ncols]
    return v


def _infer_field(rows):
    for r in rows:
        for v in r:
            if type(v) is FieldElement:
                return GF(v.modulus)
            if hasattr(v, "field") and not isinstance(v, (int, Fraction)):
                return _GenericField(v)
    return QQ


class _GenericField:
    """Adapter giving arbitrary field-like elements the coercion protocol."""

    def __init__(self, sample):
        self.zero = sample - sample
        self.one = self.zero + 1

    def __call__(self, v):
        return v
