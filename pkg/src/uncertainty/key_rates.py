from typing import Sequence

import numpy as np

from config.settings import KEY_TENORS_YEARS, PERIODS_PER_YEAR, RATINGS
from src.errors import DomainError


def key_tenor_periods(tenors_years: Sequence[float] = KEY_TENORS_YEARS,
                      periods_per_year: int = PERIODS_PER_YEAR) -> np.ndarray:
    periods = np.rint(np.asarray(tenors_years, dtype=float) * periods_per_year).astype(int)
    if periods.size and periods[0] < 1:
        raise DomainError(f"key tenor {tenors_years[0]}y is shorter than one period")
    return periods


def key_rate_map(key_periods: Sequence[int], rating_of_bond: Sequence[int], T: int,
                 num_ratings: int = len(RATINGS)) -> np.ndarray:
    """(T+n) x (K+R) embedding of K key rates and R rating spreads into stacked (y, s).

    Yield rows interpolate linearly between neighbouring key periods and hold the
    end values flat outside the key range; spread row T+i picks bond i's rating column.
    """
    keys = np.asarray(key_periods, dtype=int)
    ratings = np.asarray(rating_of_bond, dtype=int)
    if keys.size == 0:
        raise DomainError("key_rate_map needs at least one key period")
    if np.any(np.diff(keys) <= 0):
        raise DomainError("key periods must be strictly increasing")
    if keys[0] < 1 or keys[-1] > T:
        raise DomainError(f"key periods must lie in 1..{T}")
    if np.any(ratings < 0) or np.any(ratings >= num_ratings):
        raise DomainError(f"rating indices must lie in 0..{num_ratings - 1}")

    K = keys.size
    n = ratings.size
    Z = np.zeros((T + n, K + num_ratings))

    for t in range(1, T + 1):
        if t <= keys[0]:
            Z[t - 1, 0] = 1.0
        elif t >= keys[-1]:
            Z[t - 1, K - 1] = 1.0
        else:
            j = np.searchsorted(keys, t, side='right') - 1
            w = (t - keys[j]) / (keys[j + 1] - keys[j])
            Z[t - 1, j] = 1.0 - w
            Z[t - 1, j + 1] += w

    Z[T + np.arange(n), K + ratings] = 1.0
    return Z
