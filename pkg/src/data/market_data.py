import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from config.settings import HISTORY_NUM_COLUMNS
from src.data.universe import BondUniverse, parse_float, read_table
from src.errors import DataFormatError
from src.uncertainty import HistoryPanel

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_history(path: PathLike, num_columns: int = HISTORY_NUM_COLUMNS) -> HistoryPanel:
    """Daily key-rate yields and rating spreads, annualized percent in the file.

    The first column holds the date, the next num_columns the key rates followed
    by the rating spreads. Rows with missing values are dropped; dates must be
    strictly increasing. Returned observations are decimals.
    """
    frame = read_table(path, ())
    if frame.shape[1] != num_columns + 1:
        raise DataFormatError(
            f"expected a date column and {num_columns} value columns, found {frame.shape[1]} columns",
            str(path)
        )
    date_col, value_cols = frame.columns[0], list(frame.columns[1:])

    stripped = frame[value_cols].apply(lambda col: col.str.strip().str.lower())
    blank = stripped.isin(['', 'nan', 'na', '.']).any(axis=1)
    if blank.any():
        logger.warning("%s: dropped %d rows with missing values", path, int(blank.sum()))
    kept = frame[~blank]

    dates = pd.to_datetime(kept[date_col], errors='coerce')
    bad = np.flatnonzero(dates.isna().to_numpy())
    if bad.size:
        row = int(kept.index[bad[0]]) + 2
        raise DataFormatError(f"'{kept[date_col].iloc[bad[0]]}' is not a date", str(path), row, date_col)

    values = np.empty((kept.shape[0], num_columns))
    for k, (index, record) in enumerate(kept[value_cols].iterrows()):
        for j, col in enumerate(value_cols):
            values[k, j] = parse_float(record[col], path, int(index) + 2, col)

    stamps = dates.to_numpy()
    if np.any(stamps[1:] <= stamps[:-1]):
        k = int(np.argmax(stamps[1:] <= stamps[:-1])) + 1
        raise DataFormatError("dates must be strictly increasing", str(path),
                              int(kept.index[k]) + 2, date_col)

    panel = HistoryPanel(stamps, values / 100.0, tuple(value_cols))
    logger.info("loaded %d history rows from %s", panel.N, path)
    return panel


def load_weights(path: PathLike, universe: BondUniverse) -> np.ndarray:
    """Nominal value weights in universe order, normalized to sum to one.

    Bonds absent from the file get weight zero; unknown ids are an error.
    """
    frame = read_table(path, ('bond_id', 'weight'))
    index = {bond_id: i for i, bond_id in enumerate(universe.ids)}
    weights = np.zeros(universe.n)
    for k, record in enumerate(frame.to_dict('records')):
        row = k + 2
        bond_id = record['bond_id'].strip()
        if bond_id not in index:
            raise DataFormatError(f"unknown bond id '{bond_id}'", str(path), row, 'bond_id')
        weight = parse_float(record['weight'], path, row, 'weight')
        if weight < 0:
            raise DataFormatError("weights must be nonnegative", str(path), row, 'weight')
        weights[index[bond_id]] += weight

    if weights.sum() <= 0:
        raise DataFormatError("weights must have a positive sum", str(path))
    return weights / weights.sum()
