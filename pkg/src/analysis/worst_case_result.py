from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from src.instruments import CONTINUOUS, CompoundingConvention, MarketState


class WorstCaseMethod(Enum):
    EXACT = 'exact'
    LINEARIZED = 'linearized'
    ANALYTIC_BOX = 'analytic_box'
    SCENARIO_ENUM = 'scenario_enum'


@dataclass
class WorstCaseResult:
    delta_wc: float
    argmin_state: MarketState
    method: WorstCaseMethod
    solver_status: str = 'optimal'

    nominal_value: float = float('nan')

    set_duals: Dict[str, np.ndarray] = field(default_factory=dict)
    term_weights: Optional[np.ndarray] = None

    @property
    def relative_change(self) -> float:
        return float(np.expm1(self.delta_wc))

    @property
    def worst_value(self) -> float:
        return self.nominal_value * float(np.exp(self.delta_wc))

    def annualized_state(self, conv: CompoundingConvention = CONTINUOUS) -> tuple:
        return self.argmin_state.annualized(conv)

    @property
    def set_dual_vector(self) -> np.ndarray:
        if not self.set_duals:
            return np.zeros(0)
        return np.concatenate(list(self.set_duals.values()))
