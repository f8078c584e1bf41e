import numpy as np
import pytest

from src.checks import (
    CheckResult,
    VerifyReport,
    random_box,
    random_box_duals,
    random_ellipsoid,
    random_hull,
    random_instance,
    random_polyhedron,
    run_invariant_suite,
)
from src.checks.invariants import box_shortcut_gap, gradient_error, taylor_conservatism
from src.construction import build_F_matrix


def test_random_instances_are_consistent(rng):
    for _ in range(20):
        inst = random_instance(rng)
        assert inst.cf.n == inst.m_nom.n == inst.port.n
        assert inst.cf.T == inst.m_nom.T
        assert inst.budget == pytest.approx(100.0)
        assert inst.cf.maturities.max() == inst.cf.T


def test_random_sets_contain_the_nominal_state(rng):
    inst = random_instance(rng)
    for uset in (random_box(rng, inst.m_nom), random_polyhedron(rng, inst.m_nom),
                 random_ellipsoid(rng, inst.m_nom)):
        assert uset.contains(inst.m_nom)
    assert random_hull(rng, inst.m_nom).K == 4


def test_random_box_duals_are_feasible(rng):
    inst = random_instance(rng)
    box = random_box(rng, inst.m_nom)
    mu, nu = random_box_duals(rng, box, inst.cf)
    poly = box.to_polyhedral()
    F = build_F_matrix(inst.cf.n, inst.cf.T)
    np.testing.assert_allclose(poly.A.T @ mu, F.T @ nu, atol=1e-12)
    assert np.all(mu >= 0) and np.all(nu >= 0)
    t = np.tile(np.arange(1, inst.cf.T + 1), inst.cf.n)
    assert (nu / t).sum() == pytest.approx(1.0)


def test_single_checks(rng):
    inst = random_instance(rng)
    assert taylor_conservatism(inst, rng) <= 1e-9
    assert box_shortcut_gap(inst, rng) <= 1e-6
    assert gradient_error(inst) <= 1e-5


def test_report_lookup():
    report = VerifyReport([CheckResult('a', worst=0.5, tolerance=1.0, cases=1),
                           CheckResult('b', worst=0.0, tolerance=1.0, error='SolverError: x')])
    assert report.check('a').passed
    assert not report.check('b').passed
    assert not report.passed
    with pytest.raises(KeyError):
        report.check('c')


def test_invariant_suite_passes():
    report = run_invariant_suite(instances=2, seed=11)
    failed = [(c.name, c.worst, c.error) for c in report.checks if not c.passed]
    assert report.passed, failed
    assert report.check('dual_vs_cutting_plane').cases == 2
