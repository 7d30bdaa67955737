"""Truncated series: generators, Frobenius construction, operator application."""

from fractions import Fraction
from math import comb, factorial

import pytest
import sympy

from fuchsguess.errors import (AlignmentError, BadPrimeError, DegenerateExponentError,
                               NotAnExponentError, ParityError, TruncationError)
from fuchsguess.fieldcore import GF, QQ, DensePoly
from fuchsguess.ising import elliptic_e_operator, elliptic_k_operator, order3_apparent_factor
from fuchsguess.operators import DX, THETA, DiffOp
from fuchsguess.series import (LinearCombination, TruncatedSeries, apply_operator, combine,
                               compress_even, elliptic_e_series, elliptic_k_series, expand_even,
                               hypergeometric_series, series_from_operator, series_power)

from conftest import P

x = sympy.Symbol("x")


def _vals(s):
    return [Fraction(c) if s.field == QQ else int(c) for c in s.coeffs]


def _mod(vals):
    return [int(GF(P)(Fraction(v))) for v in vals]


def test_exponential_from_first_order_operator():
    L = DiffOp([DensePoly([-1], GF(P)), DensePoly([1], GF(P))], DX, GF(P))
    s = series_from_operator(L, 0, 5)
    assert _vals(s) == _mod([1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)])


def test_k_operator_series_matches_central_binomial_squares():
    s = series_from_operator(elliptic_k_operator(), 0, 5)
    assert _vals(s) == [comb(2 * n, n) ** 2 for n in range(5)] == [1, 4, 36, 400, 4900]


def test_apparent_order3_analytic_branch():
    s = series_from_operator(order3_apparent_factor(), 2, 5)
    assert s.offset == 2
    assert _vals(s) == [1, 48, 1527, 40290, 952920]


def test_not_an_exponent_and_degenerate():
    L = elliptic_k_operator()
    with pytest.raises(NotAnExponentError):
        series_from_operator(L, 1, 5)
    # theta^2 - theta: exponents 0 and 1, branch 0 collides with 1
    T = DiffOp([DensePoly((), QQ), DensePoly([-1], QQ), DensePoly([1], QQ)], THETA, QQ)
    with pytest.raises(DegenerateExponentError):
        series_from_operator(T, 0, 5)
    assert _vals(series_from_operator(T, 1, 3)) == [1, 0, 0]


def test_characteristic_collision_is_bad_prime():
    # indicial polynomial rho*(rho - p - 1/2) style collision: theta*(theta - 1/2 - P)
    F = GF(P)
    T = DiffOp([DensePoly([0, -1], F), DensePoly([-F(Fraction(1, 2)) - F(P + 0)], F),
                DensePoly([1], F)], THETA, F)
    # exponents 0 and 1/2 (+P); 1/2 + P is congruent to 1/2 mod P
    with pytest.raises((BadPrimeError, DegenerateExponentError)):
        series_from_operator(T, 0, P + 5)


def test_hypergeometric_generators():
    K = hypergeometric_series(Fraction(1, 2), Fraction(1, 2), 1, 5)
    assert _vals(K) == [1, 4, 36, 400, 4900]
    E = hypergeometric_series(Fraction(1, 2), Fraction(-1, 2), 1, 2)
    assert _vals(E) == [1, -4]
    assert _vals(hypergeometric_series(0, Fraction(1, 2), 1, 4)) == [1, 0, 0, 0]


def test_e_series_against_pochhammer_oracle():
    E = elliptic_e_series(8)
    for n, c in enumerate(E.coeffs):
        ref = sympy.rf(sympy.Rational(1, 2), n) * sympy.rf(sympy.Rational(-1, 2), n) / factorial(n) ** 2 * 16 ** n
        assert Fraction(c) == Fraction(int(ref.p), int(ref.q))
    assert _vals(E)[:3] == [1, -4, -12]


def test_hypergeometric_bad_prime():
    with pytest.raises(BadPrimeError):
        hypergeometric_series(Fraction(1, P), Fraction(1, 2), 1, 3, GF(P))


def test_apply_operator_examples():
    D = DiffOp.d()
    s = TruncatedSeries([1, 1, 1], QQ)
    assert _vals(apply_operator(D, s)) == [1, 2]
    xD2 = DiffOp([DensePoly([-2], QQ), DensePoly([0, 1], QQ)], DX, QQ)
    assert apply_operator(xD2, TruncatedSeries([1], QQ, offset=2)).is_zero()


def test_e_operator_kills_e_series():
    E = elliptic_e_series(60, GF(P))
    out = apply_operator(elliptic_e_operator().reduce(P), E)
    assert out.is_zero() and len(out) >= 55


def test_apply_operator_too_short():
    D2 = DiffOp.d() * DiffOp.d()
    with pytest.raises(TruncationError):
        apply_operator(D2, TruncatedSeries([1], QQ))


def test_combine_examples():
    s = elliptic_k_series(10)
    assert combine([s, s], (1, -1)).is_zero()
    t = combine([s, s, s], LinearCombination((1, Fraction(-2, 3), Fraction(2, 45))))
    assert t == s.scale(Fraction(17, 45))
    w = LinearCombination((1, Fraction(-1, 2), Fraction(1, 120)), ("chi5", "chi3", "chi1"))
    assert w.weights == (1, Fraction(-1, 2), Fraction(1, 120))


def test_combine_alignment_error():
    a = TruncatedSeries([1, 2, 3], QQ, ramification=2)
    b = TruncatedSeries([1, 2, 3], QQ, offset=Fraction(1, 3))
    with pytest.raises(AlignmentError):
        combine([a, b], (1, 1))


def test_compress_and_expand_even():
    s = TruncatedSeries([1, 0, 3, 0, 5], QQ, var="w")
    c = compress_even(s)
    assert _vals(c) == [1, 3, 5] and c.var == "x"
    assert expand_even(c) == s
    with pytest.raises(ParityError):
        compress_even(TruncatedSeries([1, 1, 3], QQ, var="w"))
    z = TruncatedSeries([0] * 6, QQ, var="w")
    assert compress_even(z).is_zero()


def test_compress_halves_long_series():
    s = TruncatedSeries([1 if i % 2 == 0 else 0 for i in range(13000)], GF(P), var="w")
    assert len(compress_even(s)) == 6500


def test_series_power_examples():
    s = TruncatedSeries([1, 1, 0, 0], QQ)
    assert _vals(series_power(s, 2)) == [1, 2, 1, 0]
    K = TruncatedSeries([1, 4, 36, 400], QQ)
    ref = sympy.Poly(sympy.series((1 + 4 * x + 36 * x ** 2 + 400 * x ** 3) ** 5, x, 0, 4).removeO(), x)
    want = [int(c) for c in reversed(ref.all_coeffs())]
    assert _vals(series_power(K, 5)) == want == [1, 20, 340, 5520]
    assert series_power(K, 1) == K


def test_reciprocal_against_sympy():
    s = TruncatedSeries([2, 3, 5, 7, 11], QQ)
    r = s.reciprocal()
    ref = sympy.series(1 / (2 + 3 * x + 5 * x ** 2 + 7 * x ** 3 + 11 * x ** 4), x, 0, 5).removeO()
    ref = sympy.Poly(ref, x)
    assert _vals(r) == [Fraction(int(c.p), int(c.q)) for c in reversed(ref.all_coeffs())]


def test_series_file_roundtrip_bytes():
    s = TruncatedSeries([1, Fraction(-2, 3), 5], QQ, offset=Fraction(-7, 4), ramification=4, var="w")
    text = s.to_text()
    assert TruncatedSeries.from_text(text).to_text() == text
    t = elliptic_k_series(20, GF(P))
    assert TruncatedSeries.from_text(t.to_text()).to_text() == t.to_text()
