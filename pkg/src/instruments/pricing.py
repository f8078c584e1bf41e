import numpy as np
from scipy.special import logsumexp

from src.errors import ZeroValueError
from src.instruments.cash_flows import CashFlowMatrix
from src.instruments.market_state import CONTINUOUS, CompoundingConvention, MarketState
from src.instruments.portfolio import Portfolio


def log_discount_factors(
    cf: CashFlowMatrix,
    m: MarketState,
    conv: CompoundingConvention = CONTINUOUS
) -> np.ndarray:
    """n x T matrix of log discount factors, -t(y_t+s_i) or -t log(1+y_t+s_i)."""
    m.check_dims(cf)
    rates = m.rates()
    if conv.is_continuous:
        return -cf.periods[None, :] * rates
    m.check_periodic_domain()
    return -cf.periods[None, :] * np.log1p(rates)


def discount_factors(cf: CashFlowMatrix, m: MarketState,
                     conv: CompoundingConvention = CONTINUOUS) -> np.ndarray:
    return np.exp(log_discount_factors(cf, m, conv))


def price_bonds(cf: CashFlowMatrix, m: MarketState,
                conv: CompoundingConvention = CONTINUOUS) -> np.ndarray:
    return np.sum(cf.c * discount_factors(cf, m, conv), axis=1)


def portfolio_value(cf: CashFlowMatrix, m: MarketState, port: Portfolio,
                    conv: CompoundingConvention = CONTINUOUS) -> float:
    port.check_dims(cf)
    return float(price_bonds(cf, m, conv) @ port.h)


def log_value(cf: CashFlowMatrix, m: MarketState, port: Portfolio,
              conv: CompoundingConvention = CONTINUOUS) -> float:
    """log V over the nonzero terms h_i c_{i,t}; -inf for an empty portfolio."""
    port.check_dims(cf)
    weights = port.h[:, None] * cf.c
    held = weights > 0
    if not np.any(held):
        return -np.inf
    exponents = np.log(weights[held]) + log_discount_factors(cf, m, conv)[held]
    return float(logsumexp(exponents))


def delta(cf: CashFlowMatrix, m: MarketState, m_nom: MarketState, port: Portfolio,
          conv: CompoundingConvention = CONTINUOUS) -> float:
    """Change in log portfolio value from the nominal state to m."""
    log_nominal = log_value(cf, m_nom, port, conv)
    if not np.isfinite(log_nominal):
        raise ZeroValueError("nominal portfolio value is zero")
    return log_value(cf, m, port, conv) - log_nominal


def relative_change(delta_value: float) -> float:
    return float(np.expm1(delta_value))


def bond_durations(cf: CashFlowMatrix, m: MarketState,
                   conv: CompoundingConvention = CONTINUOUS) -> np.ndarray:
    """Per-bond durations in periods, sum_t t c e^{-t(y_t+s_i)} / p_i."""
    pv = cf.c * discount_factors(cf, m, conv)
    prices = pv.sum(axis=1)
    if np.any(prices <= 0):
        raise ZeroValueError("bond with zero price has no duration")
    return pv @ cf.periods / prices
