from typing import Optional

import numpy as np

from src.conic import Affine, ConeProgram, SolverSettings, solve
from src.construction.holdings import HoldingsSet, ObjectiveSpec
from src.construction.robust_solution import (
    ConstructionMethod,
    RobustSolution,
    evaluate_holdings,
    solve_nominal,
)
from src.instruments import CashFlowMatrix, MarketState, discount_factors
from src.uncertainty import UncertaintySet


def sensitivity_exprs(cf: CashFlowMatrix, m_nom: MarketState, hset: HoldingsSet,
                      h: np.ndarray) -> list:
    """Stacked (d_yld, d_spr) as expressions in h; linear because the value is fixed at B."""
    weighted = cf.periods[None, :] * cf.c * discount_factors(cf, m_nom) / hset.budget
    d_yld = [Affine.dot(-weighted[:, t], h) for t in range(cf.T)]
    d_spr = [Affine.var(h[i], -weighted[i].sum()) for i in range(cf.n)]
    return d_yld + d_spr


def robust_construct_linearized(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    settings: Optional[SolverSettings] = None
) -> RobustSolution:
    """minimize phi(h) - lam * linearized_worst_case(h) over the holdings set."""
    hset.check_prices(cf, m_nom)
    uset.check_point(m_nom)
    if obj.lam == 0:
        h = solve_nominal(obj, hset, settings)
        return evaluate_holdings(cf, m_nom, obj, uset, h, ConstructionMethod.NOMINAL,
                                 linearized=True, settings=settings,
                                 program_objective=obj.value(h))

    prog = ConeProgram('robust_construct_linearized')
    h = prog.add_variables(hset.n, 'holdings')
    hset.add_to_program(prog, h)
    phi = obj.add_to_program(prog, h)

    d = sensitivity_exprs(cf, m_nom, hset, h)
    x_nom = m_nom.stacked()
    # -min_x d^T (x - x_nom) = max_x (-d^T x) + d^T x_nom
    at_nominal = sum((dj * xj for dj, xj in zip(d, x_nom)), Affine())
    robustness = uset.linear_support(prog, d, 'support') + at_nominal

    prog.set_objective(phi + obj.lam * robustness)
    result = solve(prog, settings).raise_for_status('linearized robust construction')
    return evaluate_holdings(
        cf, m_nom, obj, uset, result.values(h), ConstructionMethod.LINEARIZED,
        linearized=True, settings=settings, status=result.status.value,
        program_objective=result.objective
    )
