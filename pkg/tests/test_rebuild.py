"""Exact operators over Q from modular images."""

from fractions import Fraction as Fr

import pytest

from fuchsguess.errors import BadPrimeError, ReconstructionError
from fuchsguess.fieldcore import QQ, DensePoly
from fuchsguess.ising import apparent_quartic, order3_apparent_factor, order4_factor
from fuchsguess.operators import THETA, DiffOp
from fuchsguess.rebuild import (ExponentTarget, OperatorResidues, reconstruct_leading,
                                reconstruct_operator, reconstruct_operator_report)

from conftest import P, P2, primes_below

L3T_TARGETS = [
    ExponentTarget(0, [-2, 0, 2]),
    ExponentTarget("inf", [1, 2, Fr(5, 2)]),
    ExponentTarget(Fr(1, 16), [Fr(-15, 4), Fr(-13, 4), -1]),
    ExponentTarget(Fr(1, 4), [0, 1, Fr(7, 2)]),
    ExponentTarget(apparent_quartic(), [0, 1, 3], apparent=True),
]


def test_single_prime_theta_minus_two():
    L = DiffOp.theta() - 2
    res = OperatorResidues.from_operator(L, [P])
    assert reconstruct_operator(res) == L.normalize()


def test_residue_shapes_must_agree():
    a = (DiffOp.theta() - 2).reduce(P)
    b = (DiffOp.theta() * DiffOp.theta()).reduce(P2)
    with pytest.raises(BadPrimeError):
        OperatorResidues({P: a, P2: b})


def test_leading_polynomial_factors():
    L = order3_apparent_factor()
    lead, factors = reconstruct_leading(OperatorResidues.from_operator(L, [P, P2]))
    assert lead == L.leading().monic()
    mults = sorted(m for _, m in factors)
    assert mults == [1, 1, 2, 3]


def test_order3_apparent_two_primes():
    L = order3_apparent_factor()
    rep = reconstruct_operator_report(OperatorResidues.from_operator(L, [P, P2]))
    assert rep.operator == L.normalize()
    # the q1 block 6 + 185x - ... + 16119599x^5 ... survives normalization up to scale
    block = rep.operator.coeffs[1].exact_div(DensePoly([1, -16], QQ))
    assert block.coeffs[5] / block.coeffs[0] == Fr(16119599, 6)


def test_order3_apparent_with_targets():
    L = order3_apparent_factor()
    rep = reconstruct_operator_report(OperatorResidues.from_operator(L, [P, P2]), L3T_TARGETS)
    assert rep.operator == L.normalize()
    assert rep.fixed > 0 and rep.reconstructed < sum(c.degree() + 1 for c in L.coeffs)
    assert any("no logarithms" in c for c in rep.certificates)
    assert any("reduces to the given image" in c for c in rep.certificates)


def test_wrong_target_is_rejected():
    L = order3_apparent_factor()
    with pytest.raises(ReconstructionError):
        reconstruct_operator(OperatorResidues.from_operator(L, [P, P2]),
                             [ExponentTarget(0, [-2, 0, 3])])


def test_theta_basis_preserved():
    L = (DiffOp.theta() - 2) * DiffOp.theta()
    res = OperatorResidues.from_operator(L, [P])
    out = reconstruct_operator(res)
    assert out.basis == THETA and out.equivalent(L)


def test_order4_sixteen_primes_with_check():
    L = order4_factor()
    primes = primes_below(32750, 17)
    rep = reconstruct_operator_report(OperatorResidues.from_operator(L, primes[:16]),
                                      check=[L.reduce(primes[16])])
    assert rep.operator == L.normalize()
    assert "17 primes" in rep.certificates[0]


def test_too_few_primes_fails_with_report():
    L = order4_factor()
    primes = primes_below(32750, 13)
    with pytest.raises(ReconstructionError) as info:
        reconstruct_operator(OperatorResidues.from_operator(L, primes[:12]))
    assert info.value.coefficient is not None and info.value.bits_short >= 1
