import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.stats import chi2

from config.settings import RANK_TOL
from src.arrays import as_matrix
from src.errors import DimensionMismatchError, DomainError
from src.instruments import CONTINUOUS, CompoundingConvention, MarketState
from src.uncertainty.box_set import BoxSet
from src.uncertainty.ellipsoid_set import EllipsoidSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HistoryPanel:
    """N dated observations of m annualized key rates and rating spreads, in decimals."""

    dates: np.ndarray
    observations: np.ndarray
    columns: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        obs = as_matrix(self.observations, "history observations")
        dates = np.asarray(self.dates)
        if obs.shape[0] < 2:
            raise DomainError(f"history needs at least 2 observations, got {obs.shape[0]}")
        if dates.shape[0] != obs.shape[0]:
            raise DimensionMismatchError("history has a different number of dates and rows")
        columns = tuple(self.columns) or tuple(f"col{j}" for j in range(obs.shape[1]))
        if len(columns) != obs.shape[1]:
            raise DimensionMismatchError("history column names do not match the observations")
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "columns", columns)

    @property
    def N(self) -> int:
        return self.observations.shape[0]

    @property
    def m(self) -> int:
        return self.observations.shape[1]

    def mean(self) -> np.ndarray:
        return self.observations.mean(axis=0)

    def covariance(self) -> np.ndarray:
        return np.cov(self.observations, rowvar=False, ddof=1).reshape(self.m, self.m)

    def last(self) -> np.ndarray:
        return self.observations[-1].copy()


def chi2_quantile(prob: float, dof: int) -> float:
    """x with P(chi2_dof <= x) = prob."""
    if not 0.0 < prob < 1.0:
        raise DomainError(f"quantile probability must lie in (0, 1), got {prob}")
    if int(dof) != dof or dof < 1:
        raise DomainError(f"degrees of freedom must be a positive integer, got {dof}")
    return float(chi2.ppf(prob, int(dof)))


def covariance_factor(sigma: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """L with L L^T = sigma after dropping eigenvalues below rank_tol * lambda_max."""
    eigvals, eigvecs = np.linalg.eigh(sigma)
    top = eigvals.max() if eigvals.size else 0.0
    if top <= 0:
        return np.zeros((sigma.shape[0], 0))
    keep = eigvals >= rank_tol * top
    dropped = int((~keep).sum())
    if dropped:
        logger.info("dropped %d near-zero covariance directions", dropped)
    return eigvecs[:, keep] * np.sqrt(eigvals[keep])


def ellipsoid_from_history(
    panel: HistoryPanel,
    alpha: float,
    Z: Optional[np.ndarray],
    T: int,
    conv: CompoundingConvention = CONTINUOUS,
    rank_tol: float = RANK_TOL
) -> EllipsoidSet:
    """Confidence ellipsoid of the panel at confidence level alpha, embedded by Z.

    Mean and factor are estimated in annualized units and scaled to per-period
    before embedding; the squared radius is the chi2 quantile at alpha with
    m = panel.m degrees of freedom.
    """
    if Z is not None and np.shape(Z)[1] != panel.m:
        raise DimensionMismatchError(f"map has {np.shape(Z)[1]} columns, panel has {panel.m}")

    radius_sq = chi2_quantile(alpha, panel.m)
    mu = conv.to_per_period(panel.mean())
    L = conv.to_per_period(covariance_factor(panel.covariance(), rank_tol))
    logger.debug("ellipsoid from %d observations: rank %d, radius_sq %.4f", panel.N, L.shape[1], radius_sq)
    return EllipsoidSet(mu, L, radius_sq, T, Z)


def box_from_history(
    panel: HistoryPanel,
    Z: np.ndarray,
    T: int,
    conv: CompoundingConvention = CONTINUOUS
) -> BoxSet:
    """Box spanned by the historical range of every column, mapped through a nonnegative Z."""
    Z = np.asarray(Z, dtype=float)
    if np.any(Z < 0):
        raise DomainError("box_from_history needs a nonnegative map")
    lo = Z @ conv.to_per_period(panel.observations.min(axis=0))
    hi = Z @ conv.to_per_period(panel.observations.max(axis=0))
    return BoxSet(lo[:T], hi[:T], lo[T:], hi[T:])


def nominal_state(
    panel: HistoryPanel,
    Z: np.ndarray,
    T: int,
    conv: CompoundingConvention = CONTINUOUS
) -> MarketState:
    """Most recent observation mapped through Z, per-period."""
    Z = np.asarray(Z, dtype=float)
    return MarketState.from_stacked(Z @ conv.to_per_period(panel.last()), T)

