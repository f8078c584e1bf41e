from dataclasses import dataclass

import numpy as np

from src.arrays import as_vector
from src.errors import DimensionMismatchError, DomainError


@dataclass(frozen=True)
class Portfolio:
    h: np.ndarray

    def __post_init__(self):
        h = as_vector(self.h, "holdings")
        if np.any(h < 0):
            raise DomainError("holdings must be nonnegative (long-only)")
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @property
    def is_empty(self) -> bool:
        return not np.any(self.h > 0)

    def scaled(self, factor: float) -> "Portfolio":
        return Portfolio(self.h * factor)

    def check_dims(self, cf) -> None:
        if self.n != cf.n:
            raise DimensionMismatchError(f"portfolio has {self.n} bonds, cash flows have {cf.n}")

    @classmethod
    def unit(cls, i: int, n: int) -> "Portfolio":
        h = np.zeros(n)
        h[i] = 1.0
        return cls(h)

    @classmethod
    def from_value_weights(cls, weights, prices, budget: float) -> "Portfolio":
        """Holdings whose value split follows ``weights`` and whose total value is ``budget``."""
        weights = np.asarray(weights, dtype=float)
        prices = np.asarray(prices, dtype=float)
        if weights.shape != prices.shape:
            raise DimensionMismatchError("weights and prices must have the same length")
        if np.any(weights < 0) or weights.sum() <= 0:
            raise DomainError("weights must be nonnegative with a positive sum")
        if np.any(prices[weights > 0] <= 0):
            raise DomainError("bonds with positive weight need a positive price")
        weights = weights / weights.sum()
        h = np.zeros_like(weights)
        held = weights > 0
        h[held] = budget * weights[held] / prices[held]
        return cls(h)
