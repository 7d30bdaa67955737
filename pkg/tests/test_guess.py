"""Guessing annihilators, the ODE formula and its optimization."""

from fractions import Fraction

import pytest

from fuchsguess.errors import ModelError, NeedMoreTermsError
from fuchsguess.fieldcore import GF, QQ, DensePoly
from fuchsguess.guess import (GuessProblem, OdeFormulaModel, continuous_optimum, fit_formula,
                              gain, guess_ode, hyperbola_terms, max_degree_for, minimal_degree,
                              minimal_operator, minimal_operator_report, optimal_scan,
                              terms_required)
from fuchsguess.ising import (elliptic_k_operator, order2_factor, order3_apparent_factor,
                              order3_factor)
from fuchsguess.operators import DX, THETA, DiffOp
from fuchsguess.series import (TruncatedSeries, apply_operator, elliptic_k_series,
                               series_from_operator)

from conftest import P

F = GF(P)


def test_exponential_first_order():
    s = series_from_operator(DiffOp([DensePoly([-1], F), DensePoly([1], F)], DX, F), 0, 30)
    res = guess_ode(GuessProblem(s, 1, 0, DX))
    assert res.f == 1
    assert res.operators[0].equivalent(DiffOp([DensePoly([-1], F), DensePoly([1], F)], DX, F))


def test_k_series_theta_basis():
    K = elliptic_k_series(40, F)
    res = guess_ode(GuessProblem(K, 2, 1, THETA))
    assert res.f == 1
    assert res.operators[0].equivalent(elliptic_k_operator().reduce(P))
    assert res.N_used == (2 + 1) * (1 + 1) - res.f


def test_k_series_dx_basis():
    K = elliptic_k_series(40, F)
    res = guess_ode(GuessProblem(K, 2, 2, DX))
    assert res.f == 1
    assert res.operators[0].equivalent(elliptic_k_operator().reduce(P))


def test_operators_verified_through_full_length():
    K = elliptic_k_series(60, F)
    res = guess_ode(GuessProblem(K, 3, 3, THETA))
    assert res.f >= 1
    for op in res.operators:
        assert apply_operator(op, K).is_zero()


def test_need_more_terms_reports_shortfall():
    K = elliptic_k_series(12, F)
    with pytest.raises(NeedMoreTermsError) as info:
        guess_ode(GuessProblem(K, 2, 3))
    assert info.value.shortfall == 12 + 10 - 12


def test_max_degree_for():
    assert max_degree_for(40, 2, 10) == 9
    assert (2 + 1) * (9 + 1) + 10 <= 40


def test_minimal_operator_of_monomial():
    s = TruncatedSeries([1] + [0] * 29, F, offset=2)
    op = minimal_operator(s)
    assert op.equivalent(DiffOp.theta(F) - 2)


@pytest.mark.parametrize("make, rho, n, model", [
    (order2_factor, 3, 80, (1, 2, -1)),
    (order3_factor, 3, 140, (2, 3, -3)),
    (order3_apparent_factor, 2, 150, (4, 3, 1)),
])
def test_minimal_operator_round_trip_and_formula(make, rho, n, model):
    L = make().reduce(P)
    s = series_from_operator(L, rho, n)
    rep = minimal_operator_report(s)
    assert rep.operator is not None and rep.operator.equivalent(L)
    assert (rep.model.d, rep.model.q, rep.model.C) == model
    for Q, D, N in rep.samples:
        assert N == rep.model.N(Q, D)


def test_apparent_degree_matches_operator():
    # formula D_app equals the degree of the apparent factor of the leading polynomial
    assert OdeFormulaModel(4, 3, 1).D_app == 4   # quartic of the order-3 apparent factor
    assert OdeFormulaModel(2, 3, -3).D_app == 4  # quartic of the order-3 factor
    assert OdeFormulaModel(1, 2, -1).D_app == 0


def test_minimal_operator_short_series_unconfirmed():
    L = order3_apparent_factor().reduce(P)
    s = series_from_operator(L, 2, 70)
    rep = minimal_operator_report(s)
    if rep.operator is None:
        assert "unconfirmed" in rep.note and rep.order == 3
    else:
        assert rep.operator.equivalent(L)


@pytest.mark.parametrize("dqC, D_app", [((72, 33, 887), 1384), ((43, 52, 1121), 1020),
                                        ((39, 46, 861), 848)])
def test_fit_formula_recovers_models(dqC, D_app):
    m = OdeFormulaModel(*dqC)
    samples = [(Q, D, m.N(Q, D)) for Q, D in [(60, 140), (61, 139), (70, 120), (80, 100)]]
    fit = fit_formula(samples)
    assert (fit.d, fit.q, fit.C) == dqC and fit.D_app == D_app


def test_fit_formula_errors():
    with pytest.raises(ModelError):
        fit_formula([(1, 1, 5), (2, 2, 9), (3, 3, 13)])  # collinear
    with pytest.raises(ModelError):
        fit_formula([(1, 0, 1), (0, 1, 1), (0, 0, 0), (1, 1, 5)])  # inconsistent
    with pytest.raises(ModelError):
        fit_formula([(2, 0, 1), (0, 2, 1), (0, 0, 0)])  # non-integral


def test_optimal_scan_reference_cases():
    assert optimal_scan(OdeFormulaModel(72, 33, 887)).report() == "Q0=56 D0=129 f0=8 N0=7402"
    assert optimal_scan(OdeFormulaModel(43, 52, 1121)).report() == "Q0=84 D0=73 f0=3 N0=6287"
    t = optimal_scan(OdeFormulaModel(12, 7, 37))
    assert (t.Q0, t.D0, t.terms) == (11, 17, 216)


def test_optimal_scan_is_minimal_over_scanned_points():
    m = OdeFormulaModel(12, 7, 37)
    best = optimal_scan(m, f_max=40, Q_max=80)
    for f in range(1, 41):
        for Q in range(m.q, 81):
            D = m.degree_for(Q, f)
            if D.denominator == 1:
                assert (Q + 1) * (int(D) + 1) - f >= best.N0
    assert best.N0 == m.N(best.Q0, best.D0)


def test_optimal_scan_boundary_flag():
    t = optimal_scan(OdeFormulaModel(72, 33, 887), f_max=2, Q_max=40)
    assert t.at_boundary


def test_continuous_optimum():
    Q0, D0, N0 = continuous_optimum(OdeFormulaModel(72, 33, 887), 1)
    assert (round(Q0, 2), round(D0, 2), round(N0, 2)) == (57.20, 125.97, 7388.09)


def test_continuous_optimum_degenerate():
    m = OdeFormulaModel(3, 2, 1)  # D_app = 2 - 1 - 1 = 0
    Q0, D0, N0 = continuous_optimum(m, f=0) if m.D_app == 0 else (None, None, None)
    assert Q0 == m.q - 1 and N0 == m.q * m.d + m.D_app


def test_hyperbola_monotone_around_optimum():
    m = OdeFormulaModel(72, 33, 887)
    Q0 = continuous_optimum(m, 1)[0]
    q0 = round(Q0)
    here = hyperbola_terms(m, q0, 1)
    assert hyperbola_terms(m, q0 - 1, 1) >= here and hyperbola_terms(m, q0 + 1, 1) >= here


def test_terms_required_integrality():
    m = OdeFormulaModel(72, 33, 887)
    assert terms_required(m, 56, 8) == 7402
    from fuchsguess.errors import IntegralityError

    with pytest.raises(IntegralityError):
        terms_required(m, 56, 7)


def test_gain_phi6():
    assert gain(OdeFormulaModel(39, 46, 861), 46, 47) == 19464


def test_minimal_degree_chi5():
    assert minimal_degree(OdeFormulaModel(72, 33, 887)) == (1417, 103513)
