"""Singular points, exponents, formal solutions and apparent singularities."""

from fractions import Fraction as Fr

import pytest

from fuchsguess.errors import AmbiguousLiftError, IrregularSingularityError
from fuchsguess.fieldcore import GF, QQ, DensePoly
from fuchsguess.ising import (apparent_quartic, elliptic_k_operator, order2_factor,
                              order3_apparent_factor)
from fuchsguess.local import (INFINITY, SingularPoint, apparent_check, formal_solutions,
                              indicial_polynomial, invert_operator, local_exponents, residual,
                              singular_points, translate_operator)
from fuchsguess.operators import DX, THETA, DiffOp

from conftest import P

X = DensePoly.x(QQ)


def _p(*c):
    return DensePoly(c, QQ)


def test_singular_points_elliptic():
    pts = singular_points(elliptic_k_operator())
    assert pts == [SingularPoint.at(0), SingularPoint.at(Fr(1, 16)), INFINITY]


def test_singular_points_constant_leading():
    assert singular_points(DiffOp.d()) == [INFINITY]


def test_singular_points_algebraic():
    L = DiffOp([_p(1), X * _p(1, -10, 29)], DX, QQ)
    pts = singular_points(L)
    assert pts[0] == SingularPoint.at(0)
    assert INFINITY in pts
    alg = [p for p in pts if p.kind == "algebraic"]
    assert len(alg) == 1 and alg[0].minpoly == _p(1, -10, 29).monic()


def test_translate_examples():
    assert translate_operator(DiffOp.d(), Fr(5, 3)) == DiffOp.d()
    # theta at x = t + 1 becomes (t + 1) D_t
    th = DiffOp.theta().to_dx()
    assert translate_operator(th, 1) == DiffOp([_p(), _p(1, 1)], DX, QQ)


def test_invert_theta():
    assert invert_operator(DiffOp.theta()) == DiffOp([_p(), _p(-1)], THETA, QQ)


def test_translate_then_back_is_identity():
    L = order3_apparent_factor()
    assert translate_operator(translate_operator(L, Fr(1, 3)), Fr(-1, 3)) == L


@pytest.mark.parametrize("point, expected", [
    (0, [-2, 0, 2]),
    (Fr(1, 4), [0, 1, Fr(7, 2)]),
    (Fr(1, 16), [Fr(-15, 4), Fr(-13, 4), -1]),
    ("inf", [1, 2, Fr(5, 2)]),
])
def test_exponents_order3_apparent(point, expected):
    L = order3_apparent_factor()
    assert local_exponents(L, point).multiset() == [Fr(e) for e in expected]
    rep = local_exponents(L.reduce(P), point)
    assert rep.multiset() == [Fr(e) for e in expected] and all(rep.lifted)


def test_exponents_at_apparent_roots():
    L = order3_apparent_factor()
    rep = local_exponents(L, apparent_quartic())
    assert rep.multiset() == [0, 1, 3]


def test_exponents_simple():
    assert local_exponents(DiffOp.d() * DiffOp.d(), 0).multiset() == [0, 1]
    assert local_exponents(order2_factor(), 0).multiset() == [0, 3]


def test_indicial_polynomial_theta_minus_two():
    assert indicial_polynomial(DiffOp.theta() - 2, 0) == _p(-2, 1)


def test_irregular_point_reported():
    # x^2 D + 1 has an irregular singularity at 0
    with pytest.raises(IrregularSingularityError):
        local_exponents(DiffOp([_p(1), _p(0, 0, 1)], DX, QQ), 0)


def test_ambiguous_lift():
    # over F_7 the root 3 lifts to both 3 and -4 (and 3/... candidates)
    F = GF(7)
    L = DiffOp([DensePoly([-3], F), DensePoly([1], F)], THETA, F)
    with pytest.raises(AmbiguousLiftError):
        local_exponents(L, 0)


def test_formal_solutions_dx_squared():
    fs = formal_solutions(DiffOp.d() * DiffOp.d(), 0, n=5)
    assert not fs.structure.has_logs
    assert sorted(s.start for s in fs.solutions) == [0, 1]


def test_formal_solutions_theta_squared():
    th = DiffOp.theta()
    fs = formal_solutions(th * th, 0, n=5)
    assert fs.structure.max_log == 1
    assert sorted(s.max_log for s in fs.solutions) == [0, 1]


def test_formal_solutions_residual_vanishes():
    L = order3_apparent_factor()
    fs = formal_solutions(L, 0, n=12)
    for s in fs.solutions:
        for vec in residual(L, s, 0):
            assert all(v == 0 for v in vec)


def test_formal_solutions_log_free_at_apparent_root():
    L = order3_apparent_factor().reduce(P)
    fs = formal_solutions(L, apparent_quartic(), n=6)
    assert not fs.structure.has_logs
    assert sorted(s.start for s in fs.solutions) == [0, 1, 3]


def test_apparent_check_passes():
    cert = apparent_check(order3_apparent_factor(), apparent_quartic())
    assert cert.passed and cert.exponents == [0, 1, 3]


def test_apparent_check_fails_for_log():
    th = DiffOp.theta()
    assert not apparent_check(th * th, 0)


def test_apparent_check_fails_after_perturbation():
    L = order3_apparent_factor()
    c = list(L.coeffs)
    c[0] = c[0] + _p(1)
    bad = DiffOp(c, DX, QQ)
    assert not apparent_check(bad, apparent_quartic())
