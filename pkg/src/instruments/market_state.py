from dataclasses import dataclass
from enum import Enum

import numpy as np

from config.settings import PERIODIC_DOMAIN_EPS, PERIODS_PER_YEAR
from src.arrays import as_vector
from src.errors import DimensionMismatchError, DomainError


class Compounding(Enum):
    CONTINUOUS = 'continuous'
    PERIODIC = 'periodic'


@dataclass(frozen=True)
class CompoundingConvention:
    kind: Compounding = Compounding.CONTINUOUS
    periods_per_year: int = PERIODS_PER_YEAR

    def __post_init__(self):
        if int(self.periods_per_year) != self.periods_per_year or self.periods_per_year < 1:
            raise DomainError("periods_per_year must be a positive integer")

    @classmethod
    def continuous(cls, periods_per_year: int = PERIODS_PER_YEAR) -> "CompoundingConvention":
        return cls(Compounding.CONTINUOUS, periods_per_year)

    @classmethod
    def periodic(cls, periods_per_year: int = PERIODS_PER_YEAR) -> "CompoundingConvention":
        return cls(Compounding.PERIODIC, periods_per_year)

    @property
    def is_continuous(self) -> bool:
        return self.kind is Compounding.CONTINUOUS

    def to_per_period(self, annualized):
        return np.asarray(annualized, dtype=float) / self.periods_per_year

    def to_annualized(self, per_period):
        return np.asarray(per_period, dtype=float) * self.periods_per_year


CONTINUOUS = CompoundingConvention.continuous()
PERIODIC = CompoundingConvention.periodic()


@dataclass(frozen=True)
class MarketState:
    """Per-period yield curve y (length T) and per-bond spreads s (length n)."""

    y: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", as_vector(self.y, "yield curve"))
        object.__setattr__(self, "s", as_vector(self.s, "spreads"))

    @property
    def T(self) -> int:
        return self.y.shape[0]

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def dim(self) -> int:
        return self.T + self.n

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.y, self.s])

    @classmethod
    def from_stacked(cls, x, T: int) -> "MarketState":
        x = np.asarray(x, dtype=float)
        return cls(x[:T], x[T:])

    @classmethod
    def from_annualized(cls, y_annual, s_annual,
                        conv: CompoundingConvention = CONTINUOUS) -> "MarketState":
        return cls(conv.to_per_period(y_annual), conv.to_per_period(s_annual))

    def annualized(self, conv: CompoundingConvention = CONTINUOUS):
        return conv.to_annualized(self.y), conv.to_annualized(self.s)

    def shifted(self, dy=0.0, ds=0.0) -> "MarketState":
        return MarketState(self.y + dy, self.s + ds)

    def rates(self) -> np.ndarray:
        """n x T matrix of y_t + s_i."""
        return self.s[:, None] + self.y[None, :]

    def check_dims(self, cf) -> None:
        if self.T != cf.T or self.n != cf.n:
            raise DimensionMismatchError(
                f"market state is {self.T} periods x {self.n} bonds, "
                f"cash flows are {cf.T} periods x {cf.n} bonds"
            )

    def check_nominal(self) -> None:
        if np.any(self.s < 0):
            raise DomainError("nominal spreads must be nonnegative")

    def check_periodic_domain(self, eps: float = PERIODIC_DOMAIN_EPS) -> None:
        worst = float(self.rates().min())
        if worst <= -1.0 + eps:
            raise DomainError(
                f"periodic compounding needs y_t + s_i > -1 + {eps:g}, found {worst:.6g}"
            )
