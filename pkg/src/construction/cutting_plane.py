import logging
from typing import List, Optional

import numpy as np

from config.settings import CUTTING_PLANE_MAX_ITERS, CUTTING_PLANE_TOL
from src.conic import Affine, ConeKind, ConeProgram, SolverSettings, solve
from src.construction.holdings import HoldingsSet, ObjectiveKind, ObjectiveSpec
from src.construction.robust_solution import (
    ConstructionMethod,
    RobustSolution,
    evaluate_holdings,
    solve_nominal,
)
from src.errors import DomainError
from src.instruments import CashFlowMatrix, MarketState, price_bonds
from src.uncertainty import UncertaintySet

logger = logging.getLogger(__name__)


def _solve_master(obj: ObjectiveSpec, hset: HoldingsSet, scenario_prices: List[np.ndarray],
                  settings: Optional[SolverSettings]):
    """minimize phi(h) + lam * theta with theta >= -log(p_k^T h) for every scenario k."""
    prog = ConeProgram('cutting_plane_master')
    h = prog.add_variables(hset.n, 'holdings')
    theta = prog.add_variable('theta')
    hset.add_to_program(prog, h)
    phi = obj.add_to_program(prog, h)

    rows = []
    for prices in scenario_prices:
        # exp(-theta) <= p_k^T h
        rows.extend([Affine.var(theta, -1.0), Affine.constant(1.0), Affine.dot(prices, h)])
    prog.add_constraint(ConeKind.EXPONENTIAL, rows, 'scenarios')

    prog.set_objective(phi + obj.lam * Affine.var(theta))
    result = solve(prog, settings).raise_for_status('cutting-plane master')
    lower = result.objective + obj.lam * np.log(hset.budget)
    return np.maximum(result.values(h), 0.0), lower


def _initial_holdings(obj: ObjectiveSpec, hset: HoldingsSet,
                      settings: Optional[SolverSettings]) -> np.ndarray:
    if obj.kind is ObjectiveKind.TURNOVER and hset.contains(obj.h_ref):
        return obj.h_ref.copy()
    return solve_nominal(obj, hset, settings)


def robust_construct_cutting_plane(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    tol: float = CUTTING_PLANE_TOL,
    max_iters: int = CUTTING_PLANE_MAX_ITERS,
    settings: Optional[SolverSettings] = None
) -> RobustSolution:
    """minimize phi(h) - lam * worst_case(h) by outer approximation over scenarios.

    The master problem keeps a finite list of market states from the set; the
    exact worst-case analysis at the master's holdings adds the next state. The
    master value bounds the optimum from below, the best evaluated holdings from
    above. Returns the best holdings seen; converged is False when max_iters runs
    out first.
    """
    if tol <= 0 or max_iters < 1:
        raise DomainError("cutting plane needs tol > 0 and max_iters >= 1")
    hset.check_prices(cf, m_nom)
    uset.check_point(m_nom)

    if obj.lam == 0:
        h = solve_nominal(obj, hset, settings)
        return evaluate_holdings(cf, m_nom, obj, uset, h, ConstructionMethod.NOMINAL,
                                 settings=settings, program_objective=obj.value(h))

    h = _initial_holdings(obj, hset, settings)
    scenarios: List[MarketState] = [m_nom] if uset.contains(m_nom) else []
    best: Optional[RobustSolution] = None
    lower = -np.inf

    masters = 0
    while True:
        candidate = evaluate_holdings(cf, m_nom, obj, uset, h, ConstructionMethod.CUTTING_PLANE,
                                      settings=settings)
        if best is None or candidate.objective_value < best.objective_value:
            best = candidate

        gap = best.objective_value - lower
        logger.info("cutting plane after %d master solves: upper %.8f lower %.8f gap %.2e",
                    masters, best.objective_value, lower, gap)
        if gap <= tol or masters >= max_iters:
            break

        scenarios.append(candidate.worst_state)
        h, lower = _solve_master(obj, hset, [price_bonds(cf, m) for m in scenarios], settings)
        masters += 1

    best.iterations = masters
    best.gap = max(gap, 0.0)
    best.converged = gap <= tol
    best.program_objective = lower
    if not best.converged:
        logger.warning("cutting plane stopped after %d iterations with gap %.2e", masters, gap)
    return best
