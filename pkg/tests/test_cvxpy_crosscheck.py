"""Worst-case analysis against an independent cvxpy model of the same problem."""
import numpy as np
import pytest
from scipy.special import logsumexp

from src.analysis import worst_case_exact
from src.uncertainty import EllipsoidSet

cp = pytest.importorskip('cvxpy')

pytestmark = pytest.mark.skipif('CLARABEL' not in cp.installed_solvers(),
                                reason="cvxpy has no exponential cone solver")


def log_terms(cf, h):
    bonds, periods = cf.terms()
    return bonds, periods, periods + 1.0, np.log(cf.c[bonds, periods] * h[bonds])


def cvxpy_delta(cf, state, h, x, constraints):
    bonds, periods, t, weights = log_terms(cf, h)
    rates = x[periods] + x[cf.T + bonds]
    prob = cp.Problem(cp.Minimize(cp.log_sum_exp(-cp.multiply(t, rates) + weights)), constraints)
    prob.solve(solver='CLARABEL')
    assert prob.status == cp.OPTIMAL
    nominal = logsumexp(weights - t * state.rates()[bonds, periods])
    return prob.value - nominal


def test_polyhedron_matches_cvxpy(small_cf, small_state, small_portfolio, small_polyhedron):
    x = cp.Variable(small_polyhedron.dim)
    expected = cvxpy_delta(small_cf, small_state, small_portfolio.h, x,
                           [small_polyhedron.A @ x <= small_polyhedron.b])
    result = worst_case_exact(small_cf, small_state, small_portfolio, small_polyhedron)
    assert result.delta_wc == pytest.approx(expected, abs=1e-5)


def test_ellipsoid_matches_cvxpy(small_cf, small_state, small_portfolio):
    rng = np.random.default_rng(5)
    uset = EllipsoidSet(small_state.stacked(), rng.standard_normal((9, 3)) * 0.002, 4.0, 6)
    w = cp.Variable(uset.rank)
    x = uset.factor @ w + uset.center
    expected = cvxpy_delta(small_cf, small_state, small_portfolio.h, x,
                           [cp.norm(w, 2) <= uset.radius])
    result = worst_case_exact(small_cf, small_state, small_portfolio, uset)
    assert result.delta_wc == pytest.approx(expected, abs=1e-5)
    assert uset.contains(result.argmin_state, tol=1e-5)
