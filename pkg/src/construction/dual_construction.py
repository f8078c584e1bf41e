import logging
from typing import Optional

import numpy as np

from src.conic import Affine, ConeProgram, SolverSettings, solve
from src.construction.duals import (
    FROZEN_ORIENTATION,
    DualVariables,
    EntropyOrientation,
    add_dual_feasibility,
)
from src.construction.holdings import HoldingsSet, ObjectiveSpec
from src.construction.robust_solution import (
    ConstructionMethod,
    RobustSolution,
    evaluate_holdings,
    solve_nominal,
)
from src.errors import DomainError, InvalidSetError
from src.instruments import CashFlowMatrix, MarketState
from src.uncertainty import PolyhedralSet, UncertaintySet

logger = logging.getLogger(__name__)


def as_polyhedral(uset: UncertaintySet) -> Optional[PolyhedralSet]:
    """The set as A x <= b, or None when it has no polyhedral form."""
    if isinstance(uset, PolyhedralSet):
        return uset
    to_polyhedral = getattr(uset, 'to_polyhedral', None)
    if to_polyhedral is None:
        return None
    try:
        return to_polyhedral()
    except InvalidSetError:
        return None


def _require_polyhedral(uset: UncertaintySet) -> PolyhedralSet:
    poly = as_polyhedral(uset)
    if poly is None:
        raise InvalidSetError(f"{uset!r} has no polyhedral form; use the cutting-plane method")
    return poly


def _build_program(
    name: str,
    cf: CashFlowMatrix,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    poly: PolyhedralSet,
    orientation: EntropyOrientation
):
    prog = ConeProgram(name)
    h = prog.add_variables(hset.n, 'holdings')
    hset.add_to_program(prog, h)
    phi = obj.add_to_program(prog, h)
    blocks = add_dual_feasibility(prog, poly, cf, lambda i: Affine.var(h[i]), orientation)
    # -g(h, mu, nu) with p^T h = B held by the budget row
    negated_dual = blocks.penalty(poly.b) + float(np.log(hset.budget))
    return prog, h, phi, blocks, negated_dual


def robust_construct_dual(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    orientation: EntropyOrientation = FROZEN_ORIENTATION,
    settings: Optional[SolverSettings] = None
) -> RobustSolution:
    """minimize phi(h) - lam * worst_case(h) over the holdings set as one cone program.

    The inner minimum over the set is replaced by the maximum of its dual, so
    holdings and dual variables are optimized together.
    """
    hset.check_prices(cf, m_nom)
    poly = _require_polyhedral(uset)
    poly.check_point(m_nom)

    if obj.lam == 0:
        h = solve_nominal(obj, hset, settings)
        return evaluate_holdings(cf, m_nom, obj, uset, h, ConstructionMethod.NOMINAL,
                                 settings=settings, program_objective=obj.value(h))

    prog, h, phi, blocks, negated_dual = _build_program(
        'robust_construct_dual', cf, obj, hset, poly, orientation
    )
    prog.set_objective(phi + obj.lam * negated_dual)
    result = solve(prog, settings).raise_for_status('robust construction')

    duals = DualVariables(
        np.maximum(result.values(blocks.mu), 0.0),
        blocks.full_nu(np.maximum(result.values(blocks.nu), 0.0), cf)
    )
    solution = evaluate_holdings(
        cf, m_nom, obj, uset, result.values(h), ConstructionMethod.DUAL,
        settings=settings, duals=duals, status=result.status.value,
        program_objective=result.objective
    )
    logger.info(
        "dual construction, lambda=%g: objective %.8f (program %.8f), worst case %.6f",
        obj.lam, solution.objective_value, result.objective, solution.delta_wc
    )
    return solution


def robust_construct_constrained(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    eta: float,
    orientation: EntropyOrientation = FROZEN_ORIENTATION,
    settings: Optional[SolverSettings] = None,
    check_tol: float = 1e-6
) -> RobustSolution:
    """minimize phi(h) over holdings whose worst-case change stays above -eta.

    The robustness weight of obj is ignored. Raises InfeasibleProblemError when
    no holdings meet the bound.
    """
    if not eta >= 0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    hset.check_prices(cf, m_nom)
    poly = _require_polyhedral(uset)
    poly.check_point(m_nom)

    obj = obj.with_lambda(0.0)
    prog, h, phi, blocks, negated_dual = _build_program(
        'robust_construct_constrained', cf, obj, hset, poly, orientation
    )
    prog.add_nonneg([eta - negated_dual], 'robustness_budget')
    prog.set_objective(phi)
    result = solve(prog, settings).raise_for_status(f'constrained construction (eta={eta:g})')

    duals = DualVariables(
        np.maximum(result.values(blocks.mu), 0.0),
        blocks.full_nu(np.maximum(result.values(blocks.nu), 0.0), cf)
    )
    solution = evaluate_holdings(
        cf, m_nom, obj, uset, result.values(h), ConstructionMethod.CONSTRAINED,
        settings=settings, duals=duals, status=result.status.value,
        program_objective=result.objective
    )
    if solution.delta_wc < -eta - check_tol:
        logger.warning(
            "constrained construction: worst case %.8f is below the bound %.8f",
            solution.delta_wc, -eta
        )
        solution.status = 'unverified'
    return solution
