from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.analysis import WorstCaseResult, worst_case_exact, worst_case_linearized
from src.conic import ConeProgram, SolverSettings, solve
from src.construction.duals import DualVariables
from src.construction.holdings import HoldingsSet, ObjectiveSpec
from src.instruments import CashFlowMatrix, MarketState, Portfolio
from src.uncertainty import UncertaintySet


class ConstructionMethod(Enum):
    NOMINAL = 'nominal'
    DUAL = 'dual'
    CONSTRAINED = 'constrained'
    CUTTING_PLANE = 'cutting_plane'
    LINEARIZED = 'linearized'


@dataclass
class RobustSolution:
    """Robust holdings h* with the worst market state found for them.

    objective_value is phi(h*) - lam * worst_case(h*), with the worst case
    re-evaluated by the analysis module at h*.
    """

    h_star: Portfolio
    worst_state: MarketState
    objective_value: float
    nominal_term: float
    robustness_term: float
    lam: float
    method: ConstructionMethod
    status: str = 'optimal'
    duals: Optional[DualVariables] = None
    worst_case: Optional[WorstCaseResult] = None

    # solver-side objective; equals objective_value up to solver tolerance
    program_objective: float = float('nan')

    iterations: int = 1
    gap: float = 0.0
    converged: bool = True

    @property
    def delta_wc(self) -> float:
        return self.worst_case.delta_wc if self.worst_case is not None else float('nan')

    def turnover(self, h_ref) -> float:
        return 0.5 * float(np.abs(self.h_star.h - np.asarray(h_ref, dtype=float)).sum())

    def value_weights(self, prices) -> np.ndarray:
        values = self.h_star.h * np.asarray(prices, dtype=float)
        return values / values.sum()


def evaluate_holdings(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    uset: UncertaintySet,
    h,
    method: ConstructionMethod,
    linearized: bool = False,
    settings: Optional[SolverSettings] = None,
    **fields
) -> RobustSolution:
    """RobustSolution for holdings h, with the worst case recomputed at h."""
    port = Portfolio(np.maximum(np.asarray(h, dtype=float), 0.0))
    if linearized:
        worst = worst_case_linearized(cf, m_nom, port, uset, settings=settings)
    else:
        worst = worst_case_exact(cf, m_nom, port, uset, settings=settings)
    nominal_term = obj.value(port.h)
    robustness_term = -obj.lam * worst.delta_wc
    return RobustSolution(
        h_star=port,
        worst_state=worst.argmin_state,
        objective_value=nominal_term + robustness_term,
        nominal_term=nominal_term,
        robustness_term=robustness_term,
        lam=obj.lam,
        method=method,
        worst_case=worst,
        **fields
    )


def solve_nominal(obj: ObjectiveSpec, hset: HoldingsSet,
                  settings: Optional[SolverSettings] = None) -> np.ndarray:
    """argmin phi(h) over the holdings set."""
    prog = ConeProgram('nominal_construction')
    h = prog.add_variables(hset.n, 'holdings')
    hset.add_to_program(prog, h)
    prog.set_objective(obj.add_to_program(prog, h))
    result = solve(prog, settings).raise_for_status('nominal construction')
    return np.maximum(result.values(h), 0.0)
