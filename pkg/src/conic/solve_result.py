from dataclasses import dataclass, field
from enum import Enum
from typing import Dict

import numpy as np

from src.conic.affine import as_affine
from src.conic.cone_program import ConeBlock
from src.errors import InfeasibleProblemError, SolverError


class SolveStatus(Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'
    NUMERICAL_LIMIT = 'numerical_limit'


@dataclass
class SolveResult:
    status: SolveStatus
    x: np.ndarray
    z: np.ndarray
    objective: float
    primal_residual: float = float('nan')
    dual_residual: float = float('nan')
    solve_time: float = 0.0
    iterations: int = 0
    reduced_accuracy: bool = False
    backend_status: str = ''
    block_duals: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def is_optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def value(self, expr) -> float:
        return as_affine(expr).evaluate(self.x)

    def values(self, indices) -> np.ndarray:
        return self.x[np.asarray(indices, dtype=int)].copy()

    def dual(self, block: ConeBlock) -> np.ndarray:
        return self.z[block.rows].copy()

    def raise_for_status(self, context: str = 'cone program') -> 'SolveResult':
        if self.status is SolveStatus.OPTIMAL:
            return self
        message = f"{context}: solver finished with status {self.status.value} ({self.backend_status})"
        if self.status is SolveStatus.INFEASIBLE:
            raise InfeasibleProblemError(message, self.status.value)
        raise SolverError(message, self.status.value)
