import numpy as np
import pytest

from src.analysis import WorstCaseMethod, worst_case_exact
from src.construction import (
    ConstructionMethod,
    HoldingsSet,
    ObjectiveSpec,
    evaluate_holdings,
    robust_construct,
    robust_construct_constrained,
    robust_construct_cutting_plane,
    robust_construct_dual,
    robust_construct_linearized,
    verify_saddle_point,
)
from src.errors import DomainError, InfeasibleProblemError, InvalidSetError, SolverError
from src.instruments import price_bonds
from src.uncertainty import BoxSet, EllipsoidSet


@pytest.fixture
def hset(small_cf, small_state, small_portfolio):
    return HoldingsSet.for_portfolio(small_cf, small_state, small_portfolio)


@pytest.fixture
def wide_polyhedron(small_state):
    # yields within 2%, spreads within 1%, average yield move capped at +1%
    poly = BoxSet.around(small_state, 0.02, 0.01).to_polyhedral()
    row = np.concatenate([np.full(6, 1.0 / 6.0), np.zeros(3)])
    return poly.with_rows(row[None, :], [row @ small_state.stacked() + 0.01])


@pytest.fixture
def small_ellipsoid(small_state):
    rng = np.random.default_rng(7)
    return EllipsoidSet(small_state.stacked(), rng.standard_normal((9, 4)) * 0.001, 2.0, 6)


def test_zero_lambda_keeps_reference_holdings(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 0.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_box)
    assert sol.method is ConstructionMethod.NOMINAL
    assert sol.turnover(small_portfolio.h) == pytest.approx(0.0, abs=1e-6)


def test_dual_program_value_is_the_robust_objective(small_cf, small_state, small_portfolio,
                                                    hset, small_polyhedron):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 5.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_polyhedron)
    assert sol.method is ConstructionMethod.DUAL
    assert hset.contains(sol.h_star.h, tol=1e-6)
    assert sol.program_objective == pytest.approx(sol.objective_value, abs=1e-6)
    assert sol.objective_value == pytest.approx(
        obj.value(sol.h_star.h) - 5.0 * sol.delta_wc)


def test_robust_holdings_lose_less_than_reference(small_cf, small_state, small_portfolio,
                                                  hset, small_box):
    reference = worst_case_exact(small_cf, small_state, small_portfolio, small_box)
    obj = ObjectiveSpec.turnover(small_portfolio.h, 15.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_box)
    assert sol.delta_wc >= reference.delta_wc - 1e-7
    assert sol.objective_value <= -15.0 * reference.delta_wc + 1e-6


def test_dual_matches_cutting_plane(small_cf, small_state, small_portfolio, hset, small_polyhedron):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 2.0)
    dual = robust_construct_dual(small_cf, small_state, obj, hset, small_polyhedron)
    cut = robust_construct_cutting_plane(small_cf, small_state, obj, hset, small_polyhedron)
    assert cut.converged
    assert cut.method is ConstructionMethod.CUTTING_PLANE
    assert cut.objective_value == pytest.approx(dual.objective_value, abs=1e-4)
    assert cut.gap <= 1e-5


def test_cutting_plane_on_singleton_takes_one_master_solve(small_cf, small_state, small_portfolio, hset):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 3.0)
    sol = robust_construct_cutting_plane(small_cf, small_state, obj, hset,
                                         BoxSet.singleton(small_state))
    assert sol.converged
    assert sol.iterations == 1
    assert sol.delta_wc == pytest.approx(0.0, abs=1e-9)


def test_cutting_plane_rejects_bad_arguments(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 1.0)
    with pytest.raises(DomainError):
        robust_construct_cutting_plane(small_cf, small_state, obj, hset, small_box, tol=0.0)
    with pytest.raises(DomainError):
        robust_construct_cutting_plane(small_cf, small_state, obj, hset, small_box, max_iters=0)


def test_dual_method_needs_a_polyhedral_set(small_cf, small_state, small_portfolio, hset,
                                            small_ellipsoid):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 1.0)
    with pytest.raises(InvalidSetError):
        robust_construct_dual(small_cf, small_state, obj, hset, small_ellipsoid)


def test_router_sends_ellipsoids_to_cutting_plane(small_cf, small_state, small_portfolio, hset,
                                                  small_ellipsoid):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 2.0)
    sol = robust_construct(small_cf, small_state, obj, hset, small_ellipsoid)
    assert sol.method is ConstructionMethod.CUTTING_PLANE
    reference = worst_case_exact(small_cf, small_state, small_portfolio, small_ellipsoid)
    assert sol.objective_value <= -2.0 * reference.delta_wc + 1e-6


def test_router_rejects_constrained_method(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 1.0)
    with pytest.raises(DomainError):
        robust_construct(small_cf, small_state, obj, hset, small_box, ConstructionMethod.CONSTRAINED)


def test_linearized_construction(small_cf, small_state, small_portfolio, hset, small_ellipsoid):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 5.0)
    sol = robust_construct_linearized(small_cf, small_state, obj, hset, small_ellipsoid)
    assert sol.method is ConstructionMethod.LINEARIZED
    assert sol.worst_case.method is WorstCaseMethod.LINEARIZED
    assert sol.program_objective == pytest.approx(sol.objective_value, abs=1e-6)

    exact = worst_case_exact(small_cf, small_state, sol.h_star, small_ellipsoid)
    assert sol.delta_wc <= exact.delta_wc + 1e-8


def test_linearized_router(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 5.0)
    sol = robust_construct(small_cf, small_state, obj, hset, small_box, ConstructionMethod.LINEARIZED)
    assert sol.method is ConstructionMethod.LINEARIZED
    assert sol.program_objective == pytest.approx(sol.objective_value, abs=1e-6)


def test_constrained_with_loose_bound_is_nominal(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h)
    sol = robust_construct_constrained(small_cf, small_state, obj, hset, small_box, eta=10.0)
    assert sol.method is ConstructionMethod.CONSTRAINED
    assert sol.turnover(small_portfolio.h) == pytest.approx(0.0, abs=1e-5)


def test_constrained_meets_its_bound(small_cf, small_state, small_portfolio, hset, small_box):
    reference = worst_case_exact(small_cf, small_state, small_portfolio, small_box)
    eta = -0.8 * reference.delta_wc
    obj = ObjectiveSpec.turnover(small_portfolio.h)
    sol = robust_construct_constrained(small_cf, small_state, obj, hset, small_box, eta=eta)
    assert sol.status == 'optimal'
    assert sol.delta_wc >= -eta - 1e-6
    assert sol.turnover(small_portfolio.h) > 0


def test_constrained_without_loss_is_infeasible(small_cf, small_state, small_portfolio, hset, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h)
    with pytest.raises(SolverError):
        robust_construct_constrained(small_cf, small_state, obj, hset, small_box, eta=0.0)
    with pytest.raises(DomainError):
        robust_construct_constrained(small_cf, small_state, obj, hset, small_box, eta=-1.0)


def test_saddle_point_of_dual_solution(small_cf, small_state, small_portfolio, hset, small_box, rng):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 5.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_box)
    report = verify_saddle_point(sol, small_cf, small_state, obj, hset, small_box,
                                 samples=100, rng=rng, slack=1e-6)
    assert report.state_samples == 100
    assert report.passed, report


def test_linear_cost_picks_cheapest_bond(small_cf, small_state, small_box):
    prices = price_bonds(small_cf, small_state)
    hset = HoldingsSet(prices, 100.0)
    cost = np.array([1.0, 0.5, 2.0]) * prices / 100.0
    obj = ObjectiveSpec.linear_cost(cost)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_box)
    np.testing.assert_allclose(sol.value_weights(prices), [0.0, 1.0, 0.0], atol=1e-6)


def test_extra_holdings_rows_are_respected(small_cf, small_state, small_portfolio, small_box):
    prices = price_bonds(small_cf, small_state)
    cap = np.diag(prices)
    hset = HoldingsSet(prices, 100.0, A_ub=cap, b_ub=np.full(3, 45.0))
    obj = ObjectiveSpec.turnover(small_portfolio.h, 15.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, small_box)
    assert np.all(prices * sol.h_star.h <= 45.0 + 1e-5)


def test_prices_must_be_nominal(small_cf, small_state, small_portfolio, small_box):
    hset = HoldingsSet(price_bonds(small_cf, small_state) * 1.01, 100.0)
    obj = ObjectiveSpec.turnover(small_portfolio.h, 1.0)
    with pytest.raises(DomainError):
        robust_construct_dual(small_cf, small_state, obj, hset, small_box)


def test_negative_lambda_rejected(small_portfolio):
    with pytest.raises(DomainError):
        ObjectiveSpec.turnover(small_portfolio.h, -1.0)


def test_holdings_samples_are_feasible(small_cf, small_state, rng):
    prices = price_bonds(small_cf, small_state)
    hset = HoldingsSet(prices, 100.0, A_ub=np.diag(prices), b_ub=np.full(3, 60.0))
    for h in hset.sample(rng, 20):
        assert hset.contains(h)


def test_evaluate_holdings_reports_both_terms(small_cf, small_state, small_portfolio, small_box):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 2.0)
    sol = evaluate_holdings(small_cf, small_state, obj, small_box, small_portfolio.h,
                            ConstructionMethod.NOMINAL)
    assert sol.nominal_term == pytest.approx(0.0)
    assert sol.robustness_term == pytest.approx(-2.0 * sol.delta_wc)
    assert sol.value_weights(price_bonds(small_cf, small_state)) == pytest.approx([0.3, 0.5, 0.2])


def test_turnover_grows_with_lambda(small_cf, small_state, small_portfolio, hset, wide_polyhedron):
    turnovers = []
    for lam in (0.01, 1.0, 5.0, 10.0, 20.0, 50.0):
        obj = ObjectiveSpec.turnover(small_portfolio.h, lam)
        sol = robust_construct_dual(small_cf, small_state, obj, hset, wide_polyhedron)
        turnovers.append(sol.turnover(small_portfolio.h))
    assert turnovers[0] <= 1e-6
    assert turnovers[-1] > 0.05
    assert all(b >= a - 1e-6 for a, b in zip(turnovers, turnovers[1:])), turnovers


@pytest.mark.parametrize('lam', [0.5, 2.0, 10.0, 50.0])
def test_dual_matches_cutting_plane_across_lambda(small_cf, small_state, small_portfolio, hset,
                                                  wide_polyhedron, lam):
    obj = ObjectiveSpec.turnover(small_portfolio.h, lam)
    dual = robust_construct_dual(small_cf, small_state, obj, hset, wide_polyhedron)
    cut = robust_construct_cutting_plane(small_cf, small_state, obj, hset, wide_polyhedron)
    assert cut.converged
    assert cut.objective_value == pytest.approx(dual.objective_value, abs=1e-4)


def test_holdings_move_when_lambda_is_large(small_cf, small_state, small_portfolio, hset,
                                            wide_polyhedron):
    obj = ObjectiveSpec.turnover(small_portfolio.h, 50.0)
    sol = robust_construct_dual(small_cf, small_state, obj, hset, wide_polyhedron)
    reference = worst_case_exact(small_cf, small_state, small_portfolio, wide_polyhedron)
    assert sol.turnover(small_portfolio.h) > 0.05
    assert sol.delta_wc > reference.delta_wc


def test_turnover_shrinks_as_eta_loosens(small_cf, small_state, small_portfolio, hset, small_box):
    reference = worst_case_exact(small_cf, small_state, small_portfolio, small_box)
    obj = ObjectiveSpec.turnover(small_portfolio.h)
    turnovers = []
    for fraction in (0.8, 0.9, 1.0, 1.1, 1.2):
        sol = robust_construct_constrained(small_cf, small_state, obj, hset, small_box,
                                           eta=-fraction * reference.delta_wc)
        assert sol.delta_wc >= fraction * reference.delta_wc - 1e-6
        turnovers.append(sol.turnover(small_portfolio.h))
    assert all(b <= a + 1e-6 for a, b in zip(turnovers, turnovers[1:])), turnovers
    assert turnovers[-1] == pytest.approx(0.0, abs=1e-5)


def test_too_tight_eta_is_infeasible(small_cf, small_state, small_portfolio, hset, small_box):
    # every long portfolio loses at least the shortest bond's loss at the top corner
    reference = worst_case_exact(small_cf, small_state, small_portfolio, small_box)
    obj = ObjectiveSpec.turnover(small_portfolio.h)
    with pytest.raises(InfeasibleProblemError):
        robust_construct_constrained(small_cf, small_state, obj, hset, small_box,
                                     eta=-0.4 * reference.delta_wc)
