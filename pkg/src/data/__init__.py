from .universe import (
    UNIVERSE_COLUMNS,
    BondRecord,
    BondUniverse,
    load_universe,
    write_universe,
)
from .market_data import load_history, load_weights
from .dataset import MarketDataset, build_dataset, load_dataset
from .reports import (
    ResultsFile,
    format_number,
    format_percent,
    format_table,
    lambda_key,
    percent_key,
    read_results,
)

__all__ = [
    'UNIVERSE_COLUMNS',
    'BondRecord',
    'BondUniverse',
    'load_universe',
    'write_universe',
    'load_history',
    'load_weights',
    'MarketDataset',
    'build_dataset',
    'load_dataset',
    'ResultsFile',
    'format_number',
    'format_percent',
    'format_table',
    'lambda_key',
    'percent_key',
    'read_results',
]
