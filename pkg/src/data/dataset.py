import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from config.settings import (
    DEFAULT_BUDGET,
    HISTORY_FILE,
    KEY_TENORS_YEARS,
    PERIODS_PER_YEAR,
    UNIVERSE_FILE,
    WEIGHTS_FILE,
)
from src.data.market_data import load_history, load_weights
from src.data.universe import BondUniverse, load_universe
from src.errors import DataFormatError
from src.instruments import (
    CONTINUOUS,
    CashFlowMatrix,
    CompoundingConvention,
    MarketState,
    Portfolio,
    price_bonds,
)
from src.uncertainty import HistoryPanel, key_rate_map, key_tenor_periods, nominal_state

logger = logging.getLogger(__name__)


@dataclass
class MarketDataset:
    """Universe, history and nominal portfolio on one period grid."""

    universe: BondUniverse
    cf: CashFlowMatrix
    panel: HistoryPanel
    Z: np.ndarray
    m_nom: MarketState
    prices: np.ndarray
    weights: np.ndarray
    portfolio: Portfolio
    conv: CompoundingConvention = CONTINUOUS

    @property
    def T(self) -> int:
        return self.cf.T

    @property
    def n(self) -> int:
        return self.cf.n

    @property
    def budget(self) -> float:
        return float(self.prices @ self.portfolio.h)


def build_dataset(
    universe: BondUniverse,
    panel: HistoryPanel,
    weights: Optional[np.ndarray] = None,
    budget: float = DEFAULT_BUDGET,
    conv: CompoundingConvention = CONTINUOUS,
    tenors_years=KEY_TENORS_YEARS,
    periods_per_year: int = PERIODS_PER_YEAR
) -> MarketDataset:
    """Dataset on a grid long enough for both the bonds and the key tenors."""
    keys = key_tenor_periods(tenors_years, periods_per_year)
    T = max(universe.max_maturity, int(keys[-1]))
    cf = universe.cash_flows(T)
    Z = key_rate_map(keys, universe.rating_indices, T)
    if panel.m != Z.shape[1]:
        raise DataFormatError(f"history has {panel.m} columns, the key-rate map expects {Z.shape[1]}")

    m_nom = nominal_state(panel, Z, T, conv)
    prices = price_bonds(cf, m_nom, conv)
    if weights is None:
        logger.warning("no nominal weights given; using equal value weights")
        weights = np.full(universe.n, 1.0 / universe.n)
    portfolio = Portfolio.from_value_weights(weights, prices, budget)
    return MarketDataset(universe, cf, panel, Z, m_nom, prices, np.asarray(weights), portfolio, conv)


def load_dataset(data_dir: Union[str, Path], budget: float = DEFAULT_BUDGET,
                 conv: CompoundingConvention = CONTINUOUS) -> MarketDataset:
    """Universe, history and (when present) weights files from one directory."""
    data_dir = Path(data_dir)
    universe = load_universe(data_dir / UNIVERSE_FILE)
    panel = load_history(data_dir / HISTORY_FILE)
    weights_path = data_dir / WEIGHTS_FILE
    weights = load_weights(weights_path, universe) if weights_path.exists() else None
    return build_dataset(universe, panel, weights, budget, conv)
