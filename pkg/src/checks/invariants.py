import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from config.settings import (
    DEFAULT_SEED,
    VERIFY_CONSTRUCTION_INSTANCES,
    VERIFY_CONSTRUCTION_WIDTH,
    VERIFY_INSTANCES,
    VERIFY_LAMBDAS,
)
from src.analysis import worst_case_exact, worst_case_linearized
from src.checks.random_instances import (
    Instance,
    random_box,
    random_ellipsoid,
    random_instance,
    random_polyhedron,
)
from src.conic import SolverSettings
from src.construction import (
    HoldingsSet,
    ObjectiveSpec,
    maximize_dual,
    robust_construct_cutting_plane,
    robust_construct_dual,
)
from src.instruments import MarketState, delta, log_value, sensitivities, taylor_delta

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    worst: float = 0.0
    tolerance: float = 0.0
    cases: int = 0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.worst <= self.tolerance


@dataclass
class VerifyReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def taylor_conservatism(inst: Instance, rng: np.random.Generator, samples: int = 100) -> float:
    """Largest amount by which the first-order change exceeds the exact one."""
    sens = sensitivities(inst.cf, inst.m_nom, inst.port)
    box = random_box(rng, inst.m_nom, width=0.02)
    worst = -np.inf
    for m in box.sample_states(rng, samples):
        worst = max(worst, taylor_delta(sens, m, inst.m_nom) - delta(inst.cf, m, inst.m_nom, inst.port))
    return worst


def linearized_below_exact(inst: Instance, rng: np.random.Generator,
                           settings: Optional[SolverSettings] = None) -> float:
    worst = -np.inf
    for uset in (random_box(rng, inst.m_nom), random_ellipsoid(rng, inst.m_nom),
                 random_polyhedron(rng, inst.m_nom)):
        exact = worst_case_exact(inst.cf, inst.m_nom, inst.port, uset, settings=settings)
        lin = worst_case_linearized(inst.cf, inst.m_nom, inst.port, uset, settings=settings)
        worst = max(worst, lin.delta_wc - exact.delta_wc)
    return worst


def box_shortcut_gap(inst: Instance, rng: np.random.Generator,
                     settings: Optional[SolverSettings] = None) -> float:
    box = random_box(rng, inst.m_nom)
    solved = worst_case_exact(inst.cf, inst.m_nom, inst.port, box, use_shortcut=False,
                              settings=settings)
    analytic = delta(inst.cf, box.maximum_element(), inst.m_nom, inst.port)
    return abs(solved.delta_wc - analytic)


def strong_duality_gap(inst: Instance, rng: np.random.Generator,
                       settings: Optional[SolverSettings] = None) -> float:
    poly = random_polyhedron(rng, inst.m_nom)
    exact = worst_case_exact(inst.cf, inst.m_nom, inst.port, poly, settings=settings)
    value, _ = maximize_dual(inst.port.h, poly, inst.cf, inst.prices, settings=settings)
    return abs(value - exact.delta_wc)


def gradient_error(inst: Instance, step: float = 1e-6) -> float:
    """Relative error of the analytic gradient against central differences."""
    grad = sensitivities(inst.cf, inst.m_nom, inst.port).stacked
    x = inst.m_nom.stacked()
    fd = np.zeros_like(x)
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = step
        up = log_value(inst.cf, MarketState.from_stacked(x + e, inst.m_nom.T), inst.port)
        down = log_value(inst.cf, MarketState.from_stacked(x - e, inst.m_nom.T), inst.port)
        fd[j] = (up - down) / (2 * step)
    return float(np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-12))


def dual_vs_cutting_plane(inst: Instance, rng: np.random.Generator,
                          lambdas: Sequence[float] = VERIFY_LAMBDAS,
                          width: float = VERIFY_CONSTRUCTION_WIDTH,
                          settings: Optional[SolverSettings] = None) -> float:
    """Largest objective gap between the two construction methods over a lambda sweep."""
    poly = random_polyhedron(rng, inst.m_nom, width)
    hset = HoldingsSet(inst.prices, inst.budget)
    worst = 0.0
    for lam in lambdas:
        obj = ObjectiveSpec.turnover(inst.port.h, lam)
        dual = robust_construct_dual(inst.cf, inst.m_nom, obj, hset, poly, settings=settings)
        cut = robust_construct_cutting_plane(inst.cf, inst.m_nom, obj, hset, poly, settings=settings)
        worst = max(worst, abs(dual.objective_value - cut.objective_value))
    return worst


def _run(result: CheckResult, fn: Callable[[], float]) -> None:
    try:
        result.worst = max(result.worst, fn())
        result.cases += 1
    except Exception as e:
        result.error = f"{type(e).__name__}: {e}"
        logger.warning("check %s failed with %s", result.name, result.error)


def run_invariant_suite(
    instances: int = VERIFY_INSTANCES,
    seed: int = DEFAULT_SEED,
    settings: Optional[SolverSettings] = None
) -> VerifyReport:
    """Property checks on random small instances; construction checks on the first few."""
    rng = np.random.default_rng(seed)
    checks = {
        'taylor_conservatism': CheckResult('taylor_conservatism', tolerance=1e-9),
        'linearized_below_exact': CheckResult('linearized_below_exact', tolerance=1e-8),
        'box_shortcut': CheckResult('box_shortcut', tolerance=1e-6),
        'strong_duality': CheckResult('strong_duality', tolerance=1e-5),
        'gradient': CheckResult('gradient', tolerance=1e-5),
        'dual_vs_cutting_plane': CheckResult('dual_vs_cutting_plane', tolerance=1e-4),
    }

    for k in range(instances):
        inst = random_instance(rng)
        _run(checks['taylor_conservatism'], lambda: taylor_conservatism(inst, rng))
        _run(checks['linearized_below_exact'], lambda: linearized_below_exact(inst, rng, settings))
        _run(checks['box_shortcut'], lambda: box_shortcut_gap(inst, rng, settings))
        _run(checks['strong_duality'], lambda: strong_duality_gap(inst, rng, settings))
        _run(checks['gradient'], lambda: gradient_error(inst))
        if k < VERIFY_CONSTRUCTION_INSTANCES:
            _run(checks['dual_vs_cutting_plane'], lambda: dual_vs_cutting_plane(inst, rng, settings=settings))
        logger.info("verified instance %d of %d", k + 1, instances)

    return VerifyReport(list(checks.values()))
