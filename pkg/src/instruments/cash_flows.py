from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from config.settings import DEFAULT_FACE_VALUE, PERIODS_PER_YEAR
from src.arrays import as_matrix
from src.errors import DomainError


@dataclass(frozen=True)
class CashFlowMatrix:
    """Per-bond, per-period payments; column t-1 holds the payment at the end of period t."""

    c: np.ndarray

    def __post_init__(self):
        c = as_matrix(self.c, "cash flows")
        if c.shape[0] < 1 or c.shape[1] < 1:
            raise DomainError("cash flow matrix needs at least one bond and one period")
        if np.any(c < 0):
            raise DomainError("cash flows must be nonnegative")
        empty = np.flatnonzero(~np.any(c > 0, axis=1))
        if empty.size:
            raise DomainError(f"bonds {empty.tolist()} have no positive cash flow")
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def T(self) -> int:
        return self.c.shape[1]

    @property
    def periods(self) -> np.ndarray:
        return np.arange(1, self.T + 1, dtype=float)

    @property
    def maturities(self) -> np.ndarray:
        last = self.T - np.argmax(self.c[:, ::-1] > 0, axis=1)
        return last.astype(int)

    @property
    def support(self) -> np.ndarray:
        return self.c > 0

    def terms(self) -> Tuple[np.ndarray, np.ndarray]:
        """(bond index, 0-based period index) of every positive payment, bond-major."""
        bonds, periods = np.nonzero(self.support)
        return bonds, periods

    def bond(self, i: int) -> "CashFlowMatrix":
        return CashFlowMatrix(self.c[i:i + 1])

    @classmethod
    def from_bond_terms(
        cls,
        coupon_rates_pct: Sequence[float],
        periods_to_maturity: Sequence[int],
        coupons_per_year: Sequence[int],
        face_values: Sequence[float] = None,
        T: int = None,
        periods_per_year: int = PERIODS_PER_YEAR
    ) -> "CashFlowMatrix":
        rates = np.asarray(coupon_rates_pct, dtype=float)
        maturities = np.asarray(periods_to_maturity, dtype=int)
        frequencies = np.asarray(coupons_per_year, dtype=int)
        n = rates.shape[0]

        if face_values is None:
            faces = np.full(n, DEFAULT_FACE_VALUE)
        else:
            faces = np.asarray(face_values, dtype=float)

        if not (maturities.shape[0] == frequencies.shape[0] == faces.shape[0] == n):
            raise DomainError("bond term vectors must all have the same length")
        if np.any(rates < 0):
            raise DomainError("coupon rates must be nonnegative")
        if np.any(faces <= 0):
            raise DomainError("face values must be positive")
        if np.any(maturities < 1):
            raise DomainError("periods to maturity must be at least 1")

        if T is None:
            T = int(maturities.max())
        if np.any(maturities > T):
            raise DomainError(f"maturities exceed the horizon of {T} periods")

        c = np.zeros((n, T))
        for i in range(n):
            freq = int(frequencies[i])
            if freq < 1 or periods_per_year % freq != 0:
                raise DomainError(
                    f"coupon frequency {freq}/year does not divide {periods_per_year} periods/year"
                )
            step = periods_per_year // freq
            coupon = faces[i] * rates[i] / 100.0 / freq
            # coupon dates are counted back from maturity
            pay_periods = np.arange(maturities[i], 0, -step)
            c[i, pay_periods - 1] += coupon
            c[i, maturities[i] - 1] += faces[i]

        return cls(c)
