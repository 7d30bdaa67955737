"""Reference operators: the K and E hypergeometric operators and exactly known factors.

All operators are returned over Q in D_x form with polynomial
coefficients (rational-function coefficients have been cleared).
"""

from __future__ import annotations

from . import _l4_data as _l4
from .fieldcore import QQ, DensePoly
from .operators import DX, DiffOp

X = DensePoly.x(QQ)


def _p(*coeffs) -> DensePoly:
    return DensePoly(coeffs, QQ)


def apparent_quartic() -> DensePoly:
    """The apparent polynomial -8 + 252x - 1678x^2 + 3607x^3 + 4352x^4."""
    return _p(-8, 252, -1678, 3607, 4352)


def elliptic_k_operator() -> DiffOp:
    """x(1-16x)D^2 + (1-32x)D - 4, annihilating 2F1([1/2,1/2],[1],16x)."""
    return DiffOp([_p(-4), _p(1, -32), X * _p(1, -16)], DX, QQ)


def elliptic_e_operator() -> DiffOp:
    """x(1-16x)D^2 + (1-16x)D + 4, annihilating 2F1([1/2,-1/2],[1],16x)."""
    return DiffOp([_p(4), _p(1, -16), X * _p(1, -16)], DX, QQ)


def order2_factor() -> DiffOp:
    """x(1-16x)D^2 - 2(1+8x)D + 4 (exponents 0 and 3 at the origin)."""
    return DiffOp([_p(4), _p(-2, -16), X * _p(1, -16)], DX, QQ)


def order3_factor() -> DiffOp:
    """The order-three factor equivalent to a symmetric square."""
    one16 = _p(1, -16)
    p3 = X * X * one16 ** 2 * _p(-81, 1986, -17056, 34304, 8192)
    p2 = (X * X * one16 * _p(2247, -46496, 357888, -565248, -65536)).scale(2)
    p1 = _p(27, -942, 11152, -101632, 372736, -65536).scale(6)
    p0 = _p(9, -308, -6208, -101376, -49152).scale(12)
    return DiffOp([p0, p1, p2, p3], DX, QQ)


def order3_apparent_factor() -> DiffOp:
    """The order-three factor with four apparent singularities (roots of the quartic)."""
    one16 = _p(1, -16)
    q3 = X * X * _p(1, -4) * one16 ** 3 * apparent_quartic()
    q2 = (X * one16 ** 2 * _p(-12, 1172, -30499, 252146, -872579, 770128, 1183744)).scale(2)
    q1 = (one16 * _p(6, 185, -28373, 689440, -5128290, 16119599, -13139200, -17825792)).scale(4)
    q0 = _p(-294, 9469, 84480, -4652220, 33948640, -97687536, 74981376, 89128960).scale(4)
    return DiffOp([q0, q1, q2, q3], DX, QQ)


def order4_factor() -> DiffOp:
    """The order-four factor with 26..47-degree polynomial blocks."""
    one16 = _p(1, -16)
    Q = apparent_quartic()
    P4 = DensePoly(_l4.P4_COEFFS, QQ)
    P3 = DensePoly(_l4.P3_COEFFS, QQ)
    P2 = DensePoly(_l4.P2_COEFFS, QQ)
    P1 = DensePoly(_l4.P1_COEFFS, QQ)
    P0 = DensePoly(_l4.P0_OVER_16_COEFFS, QQ).scale(16)
    c4 = X ** 3 * one16 ** 4 * _p(1, -4) * _p(1, -8) * Q ** 4 * P4
    c3 = X ** 2 * one16 ** 3 * Q ** 3 * P3
    c2 = X * one16 ** 2 * Q ** 2 * P2
    c1 = one16 * Q * P1
    return DiffOp([P0, c1, c2, c3, c4], DX, QQ)


def order4_chi4_pieces() -> tuple[DiffOp, DiffOp, DiffOp]:
    """First-order operators (L11, L12, L13) of the order-four chi(4) factor.

    The full operator is L13 * lclm(L12, L11, D).
    """
    one16 = _p(1, -16)
    l11 = DiffOp([_p(0, 0, 768), one16 * _p(1, -24, 96)], DX, QQ)
    l12 = DiffOp([_p(1, 0, 384, 2048), (X * one16 * _p(1, -48, 128)).scale(2)], DX, QQ)
    p1 = X * one16 * _p(1, -4) * _p(7, 80) * _p(-7, 96, -1152, 10240)
    p0 = _p(-49, 2149, -24800, 254592, 481280, -36536320, 65536000)
    l13 = DiffOp([p0.scale(2), p1], DX, QQ)
    return l11, l12, l13


def order4_chi4_factor() -> DiffOp:
    """L13 * lclm(L12, L11, D_x), normalized."""
    from .factor import lclm

    l11, l12, l13 = order4_chi4_pieces()
    inner = lclm(l12, l11, DiffOp.d(QQ))
    return (l13 * inner).normalize()
