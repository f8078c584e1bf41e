import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.settings import COUPON_FREQUENCIES, MAX_PERIODS, PERIODS_PER_YEAR, RATINGS
from src.errors import DataFormatError
from src.instruments import CashFlowMatrix

logger = logging.getLogger(__name__)

UNIVERSE_COLUMNS = (
    'bond_id',
    'rating',
    'coupon_rate',
    'periods_to_maturity',
    'coupon_frequency',
    'face_value',
)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class BondRecord:
    bond_id: str
    rating: str
    coupon_rate: float  # annual, percent of face
    periods_to_maturity: int
    coupon_frequency: str
    face_value: float

    @property
    def rating_index(self) -> int:
        return RATINGS.index(self.rating)

    @property
    def coupons_per_year(self) -> int:
        return COUPON_FREQUENCIES[self.coupon_frequency]


class BondUniverse:
    """Bond terms in file order, with the cash-flow matrix they imply."""

    def __init__(self, records: Sequence[BondRecord], periods_per_year: int = PERIODS_PER_YEAR):
        if not records:
            raise DataFormatError("bond universe is empty")
        self.records: List[BondRecord] = list(records)
        self.periods_per_year = periods_per_year

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def ids(self) -> List[str]:
        return [r.bond_id for r in self.records]

    @property
    def max_maturity(self) -> int:
        return max(r.periods_to_maturity for r in self.records)

    @property
    def rating_indices(self) -> np.ndarray:
        return np.array([r.rating_index for r in self.records], dtype=int)

    def cash_flows(self, T: Optional[int] = None) -> CashFlowMatrix:
        """Coupons at every payment period counted back from maturity, face at maturity."""
        return CashFlowMatrix.from_bond_terms(
            [r.coupon_rate for r in self.records],
            [r.periods_to_maturity for r in self.records],
            [r.coupons_per_year for r in self.records],
            [r.face_value for r in self.records],
            T=T or self.max_maturity,
            periods_per_year=self.periods_per_year
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [[getattr(r, col) for col in UNIVERSE_COLUMNS] for r in self.records],
            columns=list(UNIVERSE_COLUMNS)
        )


def read_table(path: PathLike, required: Sequence[str]) -> pd.DataFrame:
    """Comma-separated file with one header row, every cell kept as text."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError("file not found", str(path))
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataFormatError(f"cannot parse file: {e}", str(path)) from e

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DataFormatError(f"missing columns {missing}", str(path))
    return frame


def parse_float(text: str, path: PathLike, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataFormatError(f"'{text}' is not a number", str(path), row, column) from None
    if not np.isfinite(value):
        raise DataFormatError(f"'{text}' is not finite", str(path), row, column)
    return value


def _parse_record(values: dict, path: PathLike, row: int, max_periods: int) -> BondRecord:
    bond_id = values['bond_id'].strip()
    if not bond_id:
        raise DataFormatError("empty bond id", str(path), row, 'bond_id')

    rating = values['rating'].strip().upper()
    if rating not in RATINGS:
        raise DataFormatError(f"rating '{values['rating']}' not in {RATINGS}", str(path), row, 'rating')

    coupon = parse_float(values['coupon_rate'], path, row, 'coupon_rate')
    if coupon < 0:
        raise DataFormatError("coupon rate must be nonnegative", str(path), row, 'coupon_rate')

    maturity = parse_float(values['periods_to_maturity'], path, row, 'periods_to_maturity')
    if maturity != int(maturity):
        raise DataFormatError("periods to maturity must be an integer", str(path), row,
                              'periods_to_maturity')
    if not 1 <= maturity <= max_periods:
        raise DataFormatError(f"periods to maturity must lie in 1..{max_periods}", str(path), row,
                              'periods_to_maturity')

    frequency = values['coupon_frequency'].strip().lower().replace('-', '')
    if frequency not in COUPON_FREQUENCIES:
        raise DataFormatError(f"coupon frequency '{values['coupon_frequency']}' not in "
                              f"{sorted(COUPON_FREQUENCIES)}", str(path), row, 'coupon_frequency')

    face = parse_float(values['face_value'], path, row, 'face_value')
    if face <= 0:
        raise DataFormatError("face value must be positive", str(path), row, 'face_value')

    return BondRecord(bond_id, rating, coupon, int(maturity), frequency, face)


def load_universe(path: PathLike, max_periods: int = MAX_PERIODS) -> BondUniverse:
    """Bond universe from a CSV file; row numbers in errors count the header as row 1."""
    frame = read_table(path, UNIVERSE_COLUMNS)
    if frame.empty:
        raise DataFormatError("bond universe is empty", str(path))

    records = []
    seen = set()
    for k, values in enumerate(frame.to_dict('records')):
        row = k + 2
        record = _parse_record(values, path, row, max_periods)
        if record.bond_id in seen:
            raise DataFormatError(f"duplicate bond id '{record.bond_id}'", str(path), row, 'bond_id')
        seen.add(record.bond_id)
        records.append(record)

    universe = BondUniverse(records)
    logger.info("loaded %d bonds from %s (max maturity %d periods)",
                universe.n, path, universe.max_maturity)
    return universe


def write_universe(universe: BondUniverse, path: PathLike) -> None:
    universe.to_frame().to_csv(path, index=False)
