"""Property-based checks of the algebraic invariants."""

import math
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from fuchsguess.factor import lclm, right_divide, symmetric_power
from fuchsguess.fieldcore import GF, QQ, DensePoly
from fuchsguess.fieldcore.modular import crt_combine, rational_reconstruct
from fuchsguess.guess import (GuessProblem, OdeFormulaModel, continuous_optimum, guess_ode,
                              optimal_scan)
from fuchsguess.ising import elliptic_k_operator, order2_factor, order3_apparent_factor
from fuchsguess.local import local_exponents, translate_operator
from fuchsguess.operators import DX, THETA, DiffOp
from fuchsguess.series import (TruncatedSeries, apply_operator, compress_even, elliptic_k_series,
                               expand_even, series_from_operator, series_power)

from conftest import P, PAPER_PRIMES

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

primes = st.sampled_from(PAPER_PRIMES + [101, 7919, 1000003])
small = st.integers(-20, 20)


@st.composite
def dense_polys(draw, field, max_deg=3):
    cs = draw(st.lists(small, min_size=1, max_size=max_deg + 1))
    return DensePoly([field(c) for c in cs], field)


@st.composite
def operators(draw, field, max_order=3, max_deg=3):
    r = draw(st.integers(1, max_order))
    coeffs = [draw(dense_polys(field, max_deg)) for _ in range(r)]
    lead = draw(dense_polys(field, max_deg))
    assume(not lead.is_zero())
    return DiffOp(coeffs + [lead], DX, field)


@SETTINGS
@given(st.integers(-180, 180), st.integers(1, 180), primes)
def test_rational_reconstruction_roundtrip(a, b, p):
    r = Fraction(a, b)
    assume(b % p)
    bound = math.isqrt(p // 2)
    assume(abs(r.numerator) <= bound and r.denominator <= bound)
    v = r.numerator * pow(r.denominator, -1, p) % p
    assert rational_reconstruct(v, p) == r


@SETTINGS
@given(st.lists(st.tuples(st.integers(0, 10**6), primes), min_size=1, max_size=4,
                unique_by=lambda t: t[1]))
def test_crt_reduces_back(pairs):
    pairs = [(v % p, p) for v, p in pairs]
    x, M = crt_combine(pairs)
    assert all(x % p == v for v, p in pairs)


@SETTINGS
@given(st.data(), primes)
def test_divide_roundtrip(data, p):
    F = GF(p)
    A = data.draw(operators(F, 2, 2))
    B = data.draw(operators(F, 2, 2))
    Q, R = right_divide(A * B, B)
    assert R.is_zero()
    assert Q.equivalent(A)


@SETTINGS
@given(st.data())
def test_lclm_divisible(data):
    F = GF(P)
    A = data.draw(operators(F, 1, 2))
    B = data.draw(operators(F, 2, 2))
    M = lclm(A, B)
    assert M.order <= A.order + B.order
    assert right_divide(M, A)[1].is_zero() and right_divide(M, B)[1].is_zero()


@SETTINGS
@given(st.data(), primes)
def test_operator_text_roundtrip(data, p):
    F = data.draw(st.sampled_from([QQ, GF(p)]))
    L = data.draw(operators(F))
    basis = data.draw(st.sampled_from([DX, THETA]))
    L = DiffOp(L.coeffs, basis, F)
    text = L.to_text()
    assert DiffOp.from_text(text).to_text() == text


@SETTINGS
@given(st.lists(small, min_size=1, max_size=30), st.integers(-4, 4),
       st.sampled_from([1, 2, 4]))
def test_series_text_roundtrip(cs, off, ram):
    s = TruncatedSeries(cs, QQ, Fraction(off, ram), ram)
    assert TruncatedSeries.from_text(s.to_text()).to_text() == s.to_text()


@SETTINGS
@given(st.lists(small, min_size=1, max_size=20))
def test_compress_expand(cs):
    even = []
    for c in cs:
        even += [c, 0]
    s = TruncatedSeries(even[:-1], GF(P), 0, 1, "w", normalize=False)
    assert expand_even(compress_even(s)) == s


@SETTINGS
@given(st.integers(1, 4), st.integers(1, 4))
def test_series_power_additive(a, b):
    K = elliptic_k_series(30, GF(P))
    left = series_power(K, a + b)
    right = series_power(K, a) * series_power(K, b)
    n = min(len(left), len(right))
    assert left.truncate(n) == right.truncate(n)


@SETTINGS
@given(st.integers(2, 6), st.integers(0, 5))
def test_guess_count_matches_formula(Q, D):
    s = series_from_operator(order2_factor().reduce(P), 3, 120)
    m = OdeFormulaModel(1, 2, -1)
    res = guess_ode(GuessProblem(s, Q, D))
    assert res.f == max(0, (Q + 1) * (D + 1) - m.N(Q, D))
    if res.f:
        assert res.N_used == m.N(Q, D)
    for op in res.operators:
        assert apply_operator(op, s).is_zero()


@SETTINGS
@given(st.integers(1, 1000))
def test_guess_invariant_under_scaling(c):
    F = GF(P)
    s = elliptic_k_series(40, F)
    a = guess_ode(GuessProblem(s, 2, 1))
    b = guess_ode(GuessProblem(s.scale(F(c)), 2, 1))
    assert a.f == b.f and all(x.equivalent(y) for x, y in zip(a.operators, b.operators))


@SETTINGS
@given(st.integers(-5, 5), st.integers(1, 5), st.integers(-5, 5))
def test_exponents_translate_and_left_scale(a, b, c):
    L = order3_apparent_factor()
    shift = Fraction(a, b)
    assume(shift not in (0, Fraction(1, 4), Fraction(1, 16)))
    moved = translate_operator(L, -shift)  # point 0 now sits at x = shift
    assert local_exponents(moved, shift).multiset() == local_exponents(L, 0).multiset()
    assume(c)
    scaled = L.left_scale(DensePoly([c, 1], QQ))
    assert local_exponents(scaled, 0).multiset() == [-2, 0, 2]


@SETTINGS
@given(st.integers(1, 3), st.integers(20, 60))
def test_symmetric_power_annihilates_powers(m, n):
    L = elliptic_k_operator().reduce(P)
    S = symmetric_power(L, m)
    K = elliptic_k_series(n, GF(P))
    assert apply_operator(S, series_power(K, m)).is_zero()


@SETTINGS
@given(st.sampled_from([(72, 33, 887), (43, 52, 1121), (39, 46, 861), (12, 7, 37), (4, 3, 1)]),
       st.integers(1, 20))
def test_optimal_scan_bounds(model, f_max):
    m = OdeFormulaModel(*model)
    best = optimal_scan(m, f_max=f_max, Q_max=3 * m.q + 60)
    cont = continuous_optimum(m, 1)[2]
    assert best.N0 >= math.ceil(cont) - (f_max - 1)
    for f in range(1, f_max + 1):
        for Q in range(m.q, 3 * m.q + 61):
            D = m.degree_for(Q, f)
            if D.denominator == 1 and D >= 0:
                assert m.N(Q, int(D)) >= best.N0
