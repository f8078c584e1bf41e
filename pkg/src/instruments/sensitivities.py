from dataclasses import dataclass

import numpy as np

from src.arrays import as_vector
from src.errors import DimensionMismatchError, DomainError, ZeroValueError
from src.instruments.cash_flows import CashFlowMatrix
from src.instruments.market_state import CONTINUOUS, CompoundingConvention, MarketState
from src.instruments.portfolio import Portfolio
from src.instruments.pricing import discount_factors


@dataclass(frozen=True)
class Sensitivities:
    """Gradients of log V at the nominal state: d_yld per period, d_spr per bond."""

    d_yld: np.ndarray
    d_spr: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d_yld", as_vector(self.d_yld, "yield sensitivities"))
        object.__setattr__(self, "d_spr", as_vector(self.d_spr, "spread sensitivities"))

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate([self.d_yld, self.d_spr])

    @property
    def key_rate_durations(self) -> np.ndarray:
        return -self.d_yld

    @property
    def spread_durations(self) -> np.ndarray:
        return -self.d_spr


def sensitivities(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    port: Portfolio,
    conv: CompoundingConvention = CONTINUOUS
) -> Sensitivities:
    if not conv.is_continuous:
        raise DomainError("sensitivities are only defined under continuous compounding")
    port.check_dims(cf)

    # t * h_i * c_{i,t} * e^{-t(y_t+s_i)}
    pv = port.h[:, None] * cf.c * discount_factors(cf, m_nom, conv)
    value = pv.sum()
    if value <= 0:
        raise ZeroValueError("nominal portfolio value is zero")
    weighted = pv * cf.periods[None, :]

    return Sensitivities(
        d_yld=-weighted.sum(axis=0) / value,
        d_spr=-weighted.sum(axis=1) / value
    )


def taylor_delta(sens: Sensitivities, m: MarketState, m_nom: MarketState) -> float:
    if sens.d_yld.shape[0] != m.T or sens.d_spr.shape[0] != m.n:
        raise DimensionMismatchError("sensitivities do not match the market state")
    if m.T != m_nom.T or m.n != m_nom.n:
        raise DimensionMismatchError("market state and nominal state differ in shape")
    return float(sens.d_yld @ (m.y - m_nom.y) + sens.d_spr @ (m.s - m_nom.s))
