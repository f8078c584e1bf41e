import numpy as np
import pytest

from src.analysis import (
    WorstCaseMethod,
    held_terms,
    term_weights,
    worst_case_exact,
    worst_case_linearized,
    worst_case_scenarios,
)
from src.errors import ZeroValueError
from src.instruments import (
    PERIODIC,
    CashFlowMatrix,
    MarketState,
    Portfolio,
    delta,
    portfolio_value,
    sensitivities,
    taylor_delta,
)
from src.uncertainty import BoxSet, EllipsoidSet, ScenarioHull


def test_box_shortcut_matches_solved_program(small_cf, small_state, small_portfolio, small_box):
    analytic = worst_case_exact(small_cf, small_state, small_portfolio, small_box)
    solved = worst_case_exact(small_cf, small_state, small_portfolio, small_box, use_shortcut=False)
    assert analytic.method is WorstCaseMethod.ANALYTIC_BOX
    assert solved.method is WorstCaseMethod.EXACT
    assert solved.delta_wc == pytest.approx(analytic.delta_wc, abs=1e-6)
    assert analytic.delta_wc < 0


def test_periodic_box_shortcut_matches_solved_program(small_cf, small_state, small_portfolio, small_box):
    analytic = worst_case_exact(small_cf, small_state, small_portfolio, small_box, PERIODIC)
    solved = worst_case_exact(small_cf, small_state, small_portfolio, small_box, PERIODIC,
                              use_shortcut=False)
    assert solved.delta_wc == pytest.approx(analytic.delta_wc, abs=1e-6)
    expected = delta(small_cf, small_box.maximum_element(), small_state, small_portfolio, PERIODIC)
    assert analytic.delta_wc == pytest.approx(expected)


def test_singleton_set_has_no_loss(small_cf, small_state, small_portfolio):
    result = worst_case_exact(small_cf, small_state, small_portfolio, BoxSet.singleton(small_state))
    assert result.delta_wc == pytest.approx(0.0, abs=1e-12)
    assert result.relative_change == pytest.approx(0.0, abs=1e-12)
    assert result.worst_value == pytest.approx(100.0)


def test_exact_worst_case_beats_every_sampled_state(small_cf, small_state, small_portfolio,
                                                    small_polyhedron, rng):
    result = worst_case_exact(small_cf, small_state, small_portfolio, small_polyhedron)
    assert small_polyhedron.contains(result.argmin_state, tol=1e-6)
    sampled = [delta(small_cf, m, small_state, small_portfolio)
               for m in small_polyhedron.sample_states(rng, 300)]
    assert result.delta_wc <= min(sampled) + 1e-7
    assert result.delta_wc == pytest.approx(
        delta(small_cf, result.argmin_state, small_state, small_portfolio))


def test_brute_force_grid_on_tiny_instance():
    cf = CashFlowMatrix.from_bond_terms([2.0, 0.0], [3, 2], [2, 2], T=3)
    m_nom = MarketState(np.array([0.01, 0.012, 0.013]), np.array([0.001, 0.002]))
    port = Portfolio(np.array([1.0, 2.0]))
    # one cut: the first two yields cannot both rise fully
    poly = BoxSet.around(m_nom, 0.002, 0.001).to_polyhedral().with_rows(
        np.array([[1.0, 1.0, 0.0, 0.0, 0.0]]), [m_nom.y[0] + m_nom.y[1] + 0.002]
    )
    result = worst_case_exact(cf, m_nom, port, poly)

    grid = np.linspace(-1.0, 1.0, 5)
    best = np.inf
    for a in grid:
        for b in grid:
            for c in grid:
                for u in grid:
                    for v in grid:
                        m = m_nom.shifted(np.array([a, b, c]) * 0.002, np.array([u, v]) * 0.001)
                        if poly.contains(m):
                            best = min(best, delta(cf, m, m_nom, port))
    assert result.delta_wc <= best + 1e-7
    assert result.delta_wc >= best - 2e-4


def test_ellipsoid_worst_case_is_a_loss(small_cf, small_state, small_portfolio, rng):
    ell = EllipsoidSet(small_state.stacked(), rng.standard_normal((9, 4)) * 0.001, 2.0, 6)
    result = worst_case_exact(small_cf, small_state, small_portfolio, ell)
    assert result.delta_wc < 0
    assert ell.contains(result.argmin_state, tol=1e-6)
    for m in ell.sample_states(rng, 100):
        assert result.delta_wc <= delta(small_cf, m, small_state, small_portfolio) + 1e-7


def test_linearized_is_never_above_exact(small_cf, small_state, small_portfolio,
                                         small_polyhedron, rng):
    ell = EllipsoidSet(small_state.stacked(), rng.standard_normal((9, 3)) * 0.002, 1.0, 6)
    for uset in (ell, small_polyhedron):
        exact = worst_case_exact(small_cf, small_state, small_portfolio, uset)
        lin = worst_case_linearized(small_cf, small_state, small_portfolio, uset)
        assert lin.method is WorstCaseMethod.LINEARIZED
        assert lin.delta_wc <= exact.delta_wc + 1e-8


def test_linearized_box_shortcut_uses_top_corner(small_cf, small_state, small_portfolio, small_box):
    lin = worst_case_linearized(small_cf, small_state, small_portfolio, small_box)
    sens = sensitivities(small_cf, small_state, small_portfolio)
    assert lin.delta_wc == pytest.approx(taylor_delta(sens, small_box.maximum_element(), small_state))


def test_exact_result_carries_duals_and_term_weights(small_cf, small_state, small_portfolio,
                                                     small_polyhedron):
    result = worst_case_exact(small_cf, small_state, small_portfolio, small_polyhedron)
    assert result.set_dual_vector.shape == (small_polyhedron.p,)
    assert np.all(result.set_dual_vector >= -1e-7)
    assert result.term_weights.sum() == pytest.approx(1.0)
    bonds, periods, _ = held_terms(small_cf, small_portfolio)
    assert np.all(result.term_weights[bonds, periods] > 0)


def test_term_weights_are_value_shares(small_cf, small_state, small_portfolio):
    w = term_weights(small_cf, small_state, small_portfolio)
    assert w.sum() == pytest.approx(1.0)
    value = portfolio_value(small_cf, small_state, small_portfolio)
    assert w[0, 2] * value == pytest.approx(small_portfolio.h[0] * 100.0 * np.exp(-3 * (0.012 + 0.001)))


def test_scenario_enumeration(small_cf, small_state, small_portfolio, rng):
    states = [small_state.shifted(rng.uniform(-0.003, 0.003, 6), rng.uniform(-0.001, 0.001, 3))
              for _ in range(5)]
    hull = ScenarioHull.from_states(states)

    lin = worst_case_scenarios(small_cf, small_state, small_portfolio, hull, WorstCaseMethod.LINEARIZED)
    sens = sensitivities(small_cf, small_state, small_portfolio)
    assert lin.method is WorstCaseMethod.SCENARIO_ENUM
    assert lin.delta_wc == pytest.approx(min(taylor_delta(sens, m, small_state) for m in states))

    exact = worst_case_scenarios(small_cf, small_state, small_portfolio, hull)
    vertex_best = min(delta(small_cf, m, small_state, small_portfolio) for m in states)
    assert exact.delta_wc <= vertex_best + 1e-7


def test_single_scenario_is_enumerated(small_cf, small_state, small_portfolio):
    shocked = small_state.shifted(dy=0.001)
    hull = ScenarioHull.from_states([shocked])
    result = worst_case_scenarios(small_cf, small_state, small_portfolio, hull)
    assert result.solver_status == 'enumerated'
    assert result.delta_wc == pytest.approx(delta(small_cf, shocked, small_state, small_portfolio))


def test_empty_portfolio_is_rejected(small_cf, small_state, small_box):
    with pytest.raises(ZeroValueError):
        worst_case_exact(small_cf, small_state, Portfolio(np.zeros(3)), small_box)


def test_worst_case_deepens_as_the_set_grows(small_cf, small_state, small_portfolio, rng):
    widths = [0.0005, 0.001, 0.002, 0.004, 0.008]
    boxes = [worst_case_exact(small_cf, small_state, small_portfolio,
                              BoxSet.around(small_state, w, w / 2), use_shortcut=False).delta_wc
             for w in widths]
    assert all(b <= a + 1e-7 for a, b in zip(boxes, boxes[1:])), boxes

    L = rng.standard_normal((9, 4)) * 0.001
    ellipsoids = [worst_case_exact(small_cf, small_state, small_portfolio,
                                   EllipsoidSet(small_state.stacked(), L, r, 6)).delta_wc
                  for r in (0.5, 1.0, 2.0, 4.0)]
    assert all(b <= a + 1e-7 for a, b in zip(ellipsoids, ellipsoids[1:])), ellipsoids


def test_hull_worst_case_matches_weight_grid(small_cf, small_state, small_portfolio, rng):
    states = [small_state.shifted(rng.uniform(-0.004, 0.004, 6), rng.uniform(-0.002, 0.002, 3))
              for _ in range(3)]
    hull = ScenarioHull.from_states(states)
    exact = worst_case_scenarios(small_cf, small_state, small_portfolio, hull)

    points = np.array([m.stacked() for m in states])
    steps = 40
    grid = []
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            w = np.array([i, j, steps - i - j]) / steps
            m = MarketState.from_stacked(w @ points, 6)
            grid.append(delta(small_cf, m, small_state, small_portfolio))
    assert exact.delta_wc <= min(grid) + 1e-7
    assert exact.delta_wc == pytest.approx(min(grid), abs=1e-4)
