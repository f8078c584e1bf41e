from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from config.settings import DEFAULT_BUDGET, MEMBERSHIP_TOL
from src.arrays import as_matrix, as_vector
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram
from src.errors import DimensionMismatchError, DomainError, InfeasibleProblemError
from src.instruments import CashFlowMatrix, MarketState, Portfolio, price_bonds


class ObjectiveKind(Enum):
    TURNOVER = 'turnover'
    LINEAR_COST = 'linear_cost'


@dataclass(frozen=True)
class ObjectiveSpec:
    """Nominal objective phi(h) and the robustness weight lam."""

    kind: ObjectiveKind
    lam: float = 0.0
    h_ref: Optional[np.ndarray] = None
    cost: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError(f"lambda must be nonnegative, got {self.lam}")
        if self.kind is ObjectiveKind.TURNOVER:
            if self.h_ref is None:
                raise DomainError("a turnover objective needs reference holdings")
            object.__setattr__(self, "h_ref", as_vector(self.h_ref, "reference holdings"))
        elif self.cost is None:
            raise DomainError("a linear-cost objective needs a cost vector")
        else:
            object.__setattr__(self, "cost", as_vector(self.cost, "cost vector"))

    @classmethod
    def turnover(cls, h_ref, lam: float = 0.0) -> "ObjectiveSpec":
        """phi(h) = 0.5 * ||h - h_ref||_1."""
        return cls(ObjectiveKind.TURNOVER, lam, h_ref=h_ref)

    @classmethod
    def linear_cost(cls, cost, lam: float = 0.0) -> "ObjectiveSpec":
        return cls(ObjectiveKind.LINEAR_COST, lam, cost=cost)

    def with_lambda(self, lam: float) -> "ObjectiveSpec":
        return ObjectiveSpec(self.kind, lam, self.h_ref, self.cost)

    @property
    def n(self) -> int:
        return (self.h_ref if self.kind is ObjectiveKind.TURNOVER else self.cost).shape[0]

    def value(self, h) -> float:
        h = np.asarray(h, dtype=float)
        if self.kind is ObjectiveKind.TURNOVER:
            return 0.5 * float(np.abs(h - self.h_ref).sum())
        return float(self.cost @ h)

    def add_to_program(self, prog: ConeProgram, h: np.ndarray) -> Affine:
        if len(h) != self.n:
            raise DimensionMismatchError("objective and holdings differ in length")
        if self.kind is ObjectiveKind.LINEAR_COST:
            return Affine.dot(self.cost, h)

        # h - h_ref = u_plus - u_minus with both parts nonnegative
        n = self.n
        u_plus = prog.add_variables(n, 'turnover.buy')
        u_minus = prog.add_variables(n, 'turnover.sell')
        parts = np.concatenate([u_plus, u_minus])
        prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(2 * n), parts, name='turnover.nonneg')
        rows = [
            Affine({h[i]: 1.0, u_plus[i]: -1.0, u_minus[i]: 1.0}, -self.h_ref[i])
            for i in range(n)
        ]
        prog.add_equality(rows, 'turnover.split')
        return Affine.dot(np.full(2 * n, 0.5), parts)


class HoldingsSet:
    """Long-only holdings with budget p^T h = B plus optional extra linear rows."""

    def __init__(self, prices, budget: float = DEFAULT_BUDGET, A_eq=None, b_eq=None,
                 A_ub=None, b_ub=None):
        self.prices = as_vector(prices, "prices")
        if np.any(self.prices <= 0):
            raise DomainError("budget prices must be positive")
        if not budget > 0:
            raise DomainError("budget must be positive")
        self.budget = float(budget)

        n = self.prices.shape[0]
        self.A_eq = as_matrix(np.zeros((0, n)) if A_eq is None else np.atleast_2d(A_eq),
                              "A_eq", (None, n))
        self.b_eq = as_vector(np.zeros(0) if b_eq is None else b_eq, "b_eq", self.A_eq.shape[0])
        self.A_ub = as_matrix(np.zeros((0, n)) if A_ub is None else np.atleast_2d(A_ub),
                              "A_ub", (None, n))
        self.b_ub = as_vector(np.zeros(0) if b_ub is None else b_ub, "b_ub", self.A_ub.shape[0])

    @classmethod
    def for_market(cls, cf: CashFlowMatrix, m_nom: MarketState,
                   budget: float = DEFAULT_BUDGET, **rows) -> "HoldingsSet":
        return cls(price_bonds(cf, m_nom), budget, **rows)

    @classmethod
    def for_portfolio(cls, cf: CashFlowMatrix, m_nom: MarketState, port: Portfolio,
                      **rows) -> "HoldingsSet":
        prices = price_bonds(cf, m_nom)
        return cls(prices, float(prices @ port.h), **rows)

    @property
    def n(self) -> int:
        return self.prices.shape[0]

    @property
    def has_extra_rows(self) -> bool:
        return self.A_eq.shape[0] + self.A_ub.shape[0] > 0

    def check_prices(self, cf: CashFlowMatrix, m_nom: MarketState) -> None:
        if self.n != cf.n:
            raise DimensionMismatchError(f"holdings set has {self.n} bonds, cash flows have {cf.n}")
        if not np.allclose(self.prices, price_bonds(cf, m_nom), rtol=1e-9, atol=0.0):
            raise DomainError("budget prices must be the nominal bond prices")

    def add_to_program(self, prog: ConeProgram, h: np.ndarray) -> List[ConeBlock]:
        blocks = [
            prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(self.n), h, name='holdings.long_only'),
            prog.add_equality([Affine.dot(self.prices, h, -self.budget)], 'holdings.budget'),
        ]
        if self.A_eq.shape[0]:
            blocks.append(prog.add_matrix_constraint(
                ConeKind.ZERO, self.A_eq, h, -self.b_eq, 'holdings.equalities'))
        if self.A_ub.shape[0]:
            blocks.append(prog.add_matrix_constraint(
                ConeKind.NONNEG, -self.A_ub, h, self.b_ub, 'holdings.inequalities'))
        return blocks

    def contains(self, h, tol: float = MEMBERSHIP_TOL) -> bool:
        h = np.asarray(h, dtype=float)
        scale = max(1.0, self.budget)
        return bool(
            np.all(h >= -tol)
            and abs(self.prices @ h - self.budget) <= tol * scale
            and np.all(np.abs(self.A_eq @ h - self.b_eq) <= tol * scale)
            and np.all(self.A_ub @ h <= self.b_ub + tol * scale)
        )

    def sample(self, rng: np.random.Generator, k: int, max_tries: int = 100) -> np.ndarray:
        """k feasible holdings as rows; value splits are Dirichlet, extra rows by rejection."""
        found = []
        for _ in range(max_tries):
            weights = rng.dirichlet(np.ones(self.n), size=k)
            candidates = self.budget * weights / self.prices
            found.extend(h for h in candidates if self.contains(h))
            if len(found) >= k:
                return np.array(found[:k])
        if not found:
            raise InfeasibleProblemError("could not sample holdings that satisfy the extra rows")
        return np.array(found)
