import numpy as np
import pytest
from scipy.optimize import linprog

from src.conic import Affine, ConeProgram, solve
from src.errors import DimensionMismatchError, DomainError, InvalidSetError
from src.instruments import MarketState
from src.uncertainty import (
    BoxSet,
    EllipsoidSet,
    FactorSet,
    HistoryPanel,
    PerturbationSet,
    PerturbationSpec,
    PolyhedralSet,
    ScenarioHull,
    box_from_history,
    chi2_quantile,
    covariance_factor,
    ellipsoid_from_history,
    first_differences,
    key_rate_map,
    key_tenor_periods,
    nominal_state,
)


def solved_support(uset, d):
    prog = ConeProgram('support')
    expr = uset.linear_support(prog, [Affine.constant(v) for v in d], 'support')
    prog.set_objective(expr)
    return solve(prog).raise_for_status().objective


@pytest.fixture
def base_state():
    return MarketState(np.array([0.010, 0.012, 0.015]), np.array([0.002, 0.004]))


def test_box_membership_and_maximum(base_state):
    box = BoxSet.around(base_state, 0.001, 0.0005)
    assert box.contains(base_state)
    assert not box.contains(base_state.shifted(dy=0.002))
    top = box.maximum_element()
    np.testing.assert_allclose(top.y, base_state.y + 0.001)
    np.testing.assert_allclose(top.s, base_state.s + 0.0005)


def test_box_rejects_inverted_bounds():
    with pytest.raises(InvalidSetError):
        BoxSet([0.02], [0.01], [0.0], [0.0])


def test_box_membership_checks_dimensions(base_state):
    box = BoxSet.around(base_state, 0.001, 0.001)
    with pytest.raises(DimensionMismatchError):
        box.contains(MarketState(np.zeros(2), np.zeros(2)))


def test_box_support_is_coordinatewise(base_state, rng):
    box = BoxSet.around(base_state, 0.001, 0.0005)
    d = rng.standard_normal(box.dim)
    expected = np.sum(np.maximum(-d * box.lower, -d * box.upper))
    assert solved_support(box, d) == pytest.approx(expected, abs=1e-7)


def test_box_as_polyhedron_orders_upper_rows_first(base_state):
    box = BoxSet.around(base_state, 0.001, 0.0005)
    poly = box.to_polyhedral()
    assert poly.p == 2 * box.dim
    np.testing.assert_allclose(poly.b[:box.dim], box.upper)
    np.testing.assert_allclose(poly.b[box.dim:], -box.lower)


def test_polyhedral_support_matches_linprog(base_state, rng):
    box = BoxSet.around(base_state, 0.002, 0.001).to_polyhedral()
    poly = box.with_rows(np.ones((1, box.dim)), [base_state.stacked().sum() + 0.001])
    d = rng.standard_normal(poly.dim)
    res = linprog(d, A_ub=poly.A, b_ub=poly.b, bounds=[(None, None)] * poly.dim, method='highs')
    assert solved_support(poly, d) == pytest.approx(-res.fun, abs=1e-7)


def test_unbounded_polyhedron_is_rejected():
    with pytest.raises(InvalidSetError):
        PolyhedralSet(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]), 1)


def test_empty_polyhedron_is_rejected():
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    with pytest.raises(InvalidSetError):
        PolyhedralSet(A, np.array([-1.0, -1.0, 1.0, 1.0]), 1)


def test_polyhedron_samples_stay_inside(base_state, rng):
    poly = BoxSet.around(base_state, 0.002, 0.001).to_polyhedral().with_rows(
        np.ones((1, 5)), [base_state.stacked().sum()]
    )
    for x in poly.sample(rng, 20):
        assert poly.contains_stacked(x, tol=1e-6)


def test_ellipsoid_membership(base_state):
    L = np.diag([0.001, 0.002, 0.001, 0.0005, 0.0005])
    ell = EllipsoidSet(base_state.stacked(), L, 4.0, 3)
    assert ell.contains(base_state)
    assert ell.contains(base_state.shifted(dy=np.array([0.002, 0.0, 0.0])))
    assert not ell.contains(base_state.shifted(dy=np.array([0.0021, 0.0, 0.0])))


def test_ellipsoid_support_matches_closed_form(base_state, rng):
    L = rng.standard_normal((5, 2)) * 0.001
    ell = EllipsoidSet(base_state.stacked(), L, 2.0, 3)
    d = rng.standard_normal(5)
    assert solved_support(ell, d) == pytest.approx(-ell.support_value(d), abs=1e-7)


def test_ellipsoid_rejects_wide_factor():
    with pytest.raises(InvalidSetError):
        EllipsoidSet(np.zeros(2), np.ones((2, 3)), 1.0, 1)


def test_ellipsoid_samples_stay_inside(base_state, rng):
    ell = EllipsoidSet(base_state.stacked(), rng.standard_normal((5, 3)) * 0.001, 1.5, 3)
    for x in ell.sample(rng, 30):
        assert ell.contains_stacked(x)


def test_rank_zero_ellipsoid_is_a_point(base_state):
    ell = EllipsoidSet(base_state.stacked(), np.zeros((5, 0)), 1.0, 3)
    assert ell.contains(base_state)
    assert not ell.contains(base_state.shifted(dy=1e-4))


def test_scenario_hull_support_is_best_vertex(base_state, rng):
    states = [base_state.shifted(rng.uniform(-0.002, 0.002, 3), rng.uniform(0, 0.001, 2))
              for _ in range(4)]
    hull = ScenarioHull.from_states(states)
    d = rng.standard_normal(5)
    expected = max(-d @ m.stacked() for m in states)
    assert solved_support(hull, d) == pytest.approx(expected, abs=1e-7)
    assert hull.contains(states[0])
    middle = MarketState.from_stacked(np.mean([m.stacked() for m in states], axis=0), 3)
    assert hull.contains(middle)
    assert not hull.contains(base_state.shifted(dy=0.01))


def test_scenario_hull_needs_points():
    with pytest.raises(InvalidSetError):
        ScenarioHull.from_states([])


def test_factor_set_support_matches_extreme_point(base_state, rng):
    Z = rng.standard_normal((5, 2)) * 0.001
    fset = FactorSet(Z, [-1.0, -1.0], [1.0, 1.0], np.full(5, 1e-4), 3)
    d = rng.standard_normal(5)
    x = fset.extreme_point(d)
    assert fset.contains_stacked(x, tol=1e-6)
    assert solved_support(fset, d) == pytest.approx(-(d @ x), abs=1e-6)


def test_first_differences():
    np.testing.assert_array_equal(first_differences(3), [[-1, 1, 0], [0, -1, 1]])
    assert first_differences(1).shape == (0, 1)


def test_bounded_perturbation_is_polyhedral(base_state):
    spec = PerturbationSpec(np.full(3, -0.001), np.full(3, 0.002), base_state)
    pset = PerturbationSet(spec)
    poly = pset.to_polyhedral()
    shifted = base_state.shifted(dy=np.array([0.002, -0.001, 0.0]))
    assert pset.contains(shifted) and poly.contains(shifted)
    spread_moved = base_state.shifted(ds=0.001)
    assert not pset.contains(spread_moved) and not poly.contains(spread_moved)


def test_perturbation_budgets(base_state, rng):
    spec = PerturbationSpec(np.full(3, -0.01), np.full(3, 0.01), base_state,
                            kappa=1e-5, omega=1e-6)
    pset = PerturbationSet(spec)
    with pytest.raises(InvalidSetError):
        pset.to_polyhedral()
    # rough curve: inside the bounds and the mean-square budget, outside the roughness budget
    assert not pset.contains(base_state.shifted(dy=np.array([0.001, -0.001, 0.001])))
    assert pset.contains(base_state.shifted(dy=np.full(3, 0.001)))

    d = rng.standard_normal(5)
    x = pset.extreme_point(d)
    assert solved_support(pset, d) == pytest.approx(-(d @ x), abs=1e-6)


def test_key_rate_map_interpolates_between_keys():
    Z = key_rate_map([1, 3], [1, 0], T=4, num_ratings=2)
    np.testing.assert_allclose(Z[:4, :2], [[1, 0], [0.5, 0.5], [0, 1], [0, 1]])
    np.testing.assert_allclose(Z[4:, 2:], [[0, 1], [1, 0]])
    np.testing.assert_allclose(Z[:4].sum(axis=1), 1.0)


def test_key_rate_map_rejects_keys_beyond_horizon():
    with pytest.raises(DomainError):
        key_rate_map([1, 8], [0], T=6)


def test_key_tenors_in_periods():
    np.testing.assert_array_equal(key_tenor_periods(), [1, 2, 4, 6, 10, 14, 20, 40, 60])


def test_chi2_quantiles():
    assert chi2_quantile(0.5, 2) == pytest.approx(2 * np.log(2))
    assert chi2_quantile(0.5, 13) == pytest.approx(12.34, abs=0.01)
    assert chi2_quantile(0.99, 13) == pytest.approx(27.69, abs=0.01)
    with pytest.raises(DomainError):
        chi2_quantile(1.0, 13)


def test_covariance_factor_drops_null_directions(rng):
    B = rng.standard_normal((4, 2))
    sigma = B @ B.T
    L = covariance_factor(sigma)
    assert L.shape == (4, 2)
    np.testing.assert_allclose(L @ L.T, sigma, atol=1e-10)


@pytest.fixture
def panel(rng):
    obs = 2.0 + 0.1 * rng.standard_normal((40, 3))
    return HistoryPanel(np.arange(40), obs / 100.0, ('k1', 'k2', 'AAA'))


def test_history_sets_are_per_period(panel):
    Z = key_rate_map([1, 2], [0], T=3, num_ratings=1)
    ell = ellipsoid_from_history(panel, 0.9, Z, 3)
    np.testing.assert_allclose(ell.center, Z @ panel.mean() / 2.0)
    assert ell.radius_sq == pytest.approx(chi2_quantile(0.9, 3))

    box = box_from_history(panel, Z, 3)
    assert box.contains(nominal_state(panel, Z, 3))
    np.testing.assert_allclose(box.upper, Z @ panel.observations.max(axis=0) / 2.0)


def test_history_needs_two_rows():
    with pytest.raises(DomainError):
        HistoryPanel(np.arange(1), np.ones((1, 3)))
