from typing import List, Sequence

import numpy as np
from scipy.optimize import linprog

from config.settings import MEMBERSHIP_TOL
from src.arrays import as_matrix
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram
from src.errors import DimensionMismatchError, InvalidSetError
from src.instruments import MarketState
from src.uncertainty.base_set import UncertaintySet


class ScenarioHull(UncertaintySet):
    """Convex hull of K scenario points, one stacked (y, s) per row."""

    def __init__(self, points, T: int):
        points = as_matrix(points, "scenario points")
        if points.shape[0] < 1:
            raise InvalidSetError("a scenario hull needs at least one scenario")
        if points.shape[1] < T:
            raise DimensionMismatchError(f"scenarios have {points.shape[1]} entries, fewer than T={T}")
        super().__init__(T, points.shape[1] - T)
        self.points = points

    @classmethod
    def from_states(cls, states: Sequence[MarketState]) -> "ScenarioHull":
        if not states:
            raise InvalidSetError("a scenario hull needs at least one scenario")
        T, n = states[0].T, states[0].n
        if any(m.T != T or m.n != n for m in states):
            raise DimensionMismatchError("all scenarios must share T and n")
        return cls(np.array([m.stacked() for m in states]), T)

    @property
    def K(self) -> int:
        return self.points.shape[0]

    def scenario(self, k: int) -> MarketState:
        return self.to_state(self.points[k])

    def scenarios(self) -> List[MarketState]:
        return [self.scenario(k) for k in range(self.K)]

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        lam = prog.add_variables(self.K, 'hull.weights')
        rows = [Affine.var(x[j], -1.0) + Affine.dot(self.points[:, j], lam) for j in range(self.dim)]
        combination = prog.add_equality(rows, 'hull.combination')
        simplex = prog.add_equality([Affine.total(lam) - 1.0], 'hull.simplex')
        weights = prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(self.K), lam, name='hull.nonneg')
        return [combination, simplex, weights]

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        # min ||P^T lam - x||_inf over the simplex, as an LP in (lam, r)
        K, m = self.K, self.dim
        c = np.zeros(K + 1)
        c[-1] = 1.0
        P = self.points.T
        A_ub = np.block([[P, -np.ones((m, 1))], [-P, -np.ones((m, 1))]])
        b_ub = np.concatenate([x, -x])
        A_eq = np.concatenate([np.ones(K), [0.0]])[None, :]
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                      bounds=[(0, None)] * (K + 1), method='highs')
        return bool(res.status == 0 and res.fun <= tol)

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the scenarios")
        theta = prog.add_variable(f'{name}.theta')
        rows = []
        for point in self.points:
            expr = Affine.var(theta)
            for j, dj in enumerate(d):
                if point[j] != 0.0:
                    expr = expr + dj * point[j]
            rows.append(expr)
        prog.add_nonneg(rows, f'{name}.vertices')
        return Affine.var(theta)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        weights = rng.dirichlet(np.ones(self.K), size=k)
        return weights @ self.points

    def __repr__(self) -> str:
        return f"ScenarioHull(K={self.K}, T={self.T}, n={self.n})"
