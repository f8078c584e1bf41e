from .cash_flows import CashFlowMatrix
from .market_state import (
    CONTINUOUS,
    PERIODIC,
    Compounding,
    CompoundingConvention,
    MarketState,
)
from .portfolio import Portfolio
from .pricing import (
    bond_durations,
    delta,
    discount_factors,
    log_discount_factors,
    log_value,
    portfolio_value,
    price_bonds,
    relative_change,
)
from .sensitivities import Sensitivities, sensitivities, taylor_delta

__all__ = [
    'CashFlowMatrix',
    'Compounding',
    'CompoundingConvention',
    'CONTINUOUS',
    'PERIODIC',
    'MarketState',
    'Portfolio',
    'Sensitivities',
    'bond_durations',
    'delta',
    'discount_factors',
    'log_discount_factors',
    'log_value',
    'portfolio_value',
    'price_bonds',
    'relative_change',
    'sensitivities',
    'taylor_delta',
]
