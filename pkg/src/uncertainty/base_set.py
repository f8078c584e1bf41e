from abc import ABC, abstractmethod
from typing import List, Optional, Sequence

import numpy as np

from config.settings import MEMBERSHIP_TOL
from src.conic import Affine, ConeBlock, ConeProgram, solve
from src.errors import DimensionMismatchError, InvalidSetError
from src.instruments import MarketState


class UncertaintySet(ABC):
    """Compact convex set of stacked (y, s) points in R^(T+n), per-period units."""

    def __init__(self, T: int, n: int):
        if T < 1 or n < 0:
            raise InvalidSetError(f"invalid set dimensions T={T}, n={n}")
        self.T = int(T)
        self.n = int(n)

    @property
    def dim(self) -> int:
        return self.T + self.n

    @property
    def name(self) -> str:
        return self.__class__.__name__

    @abstractmethod
    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        """Constrain program variables x (stacked (y, s) indices) to the set.

        Returns the blocks that define the set, in the order their duals are reported.
        """
        pass

    @abstractmethod
    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        pass

    @abstractmethod
    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        """Expression e with min e = max over the set of -d^T x, for d affine in prog variables."""
        pass

    def contains(self, point: MarketState, tol: float = MEMBERSHIP_TOL) -> bool:
        self.check_point(point)
        return self.contains_stacked(point.stacked(), tol)

    def maximum_element(self) -> Optional[MarketState]:
        return None

    def check_point(self, point: MarketState) -> None:
        if point.T != self.T or point.n != self.n:
            raise DimensionMismatchError(
                f"{self.name} lives in T={self.T}, n={self.n}; point has T={point.T}, n={point.n}"
            )

    def to_state(self, x: np.ndarray) -> MarketState:
        return MarketState.from_stacked(x, self.T)

    def extreme_point(self, direction: np.ndarray) -> np.ndarray:
        """A minimizer of direction^T x over the set."""
        prog = ConeProgram(f'{self.name}.extreme_point')
        x = prog.add_variables(self.dim, 'x')
        self.add_to_program(prog, x)
        prog.set_objective(Affine.dot(direction, x))
        result = solve(prog).raise_for_status(f'{self.name} extreme point')
        return result.values(x)

    def support_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        directions = rng.standard_normal((count, self.dim))
        return np.array([self.extreme_point(d) for d in directions])

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        """k points of the set as rows of stacked (y, s)."""
        points = self.support_points(rng, max(2, min(2 * self.dim, 16)))
        weights = rng.dirichlet(np.ones(points.shape[0]), size=k)
        return weights @ points

    def sample_states(self, rng: np.random.Generator, k: int) -> List[MarketState]:
        return [self.to_state(x) for x in self.sample(rng, k)]

    def __repr__(self) -> str:
        return f"{self.name}(T={self.T}, n={self.n})"
