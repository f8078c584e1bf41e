import shutil
from pathlib import Path

import numpy as np
import pytest

from config.settings import DEFAULT_SEED
from src.instruments import CashFlowMatrix, MarketState, Portfolio, price_bonds
from src.uncertainty import BoxSet


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def small_cf():
    """Three bonds over six semiannual periods: a zero, a 4% semiannual and a 3% annual."""
    return CashFlowMatrix.from_bond_terms([0.0, 4.0, 3.0], [3, 6, 6], [2, 2, 1], T=6)


@pytest.fixture
def small_state():
    y = np.array([0.010, 0.011, 0.012, 0.013, 0.0135, 0.014])
    s = np.array([0.001, 0.002, 0.004])
    return MarketState(y, s)


@pytest.fixture
def small_portfolio(small_cf, small_state):
    prices = price_bonds(small_cf, small_state)
    return Portfolio.from_value_weights([0.3, 0.5, 0.2], prices, 100.0)


@pytest.fixture
def small_box(small_state):
    return BoxSet.around(small_state, 0.002, 0.001)


@pytest.fixture
def tmp_out(tmp_path):
    out = tmp_path / 'out'
    out.mkdir()
    return out


@pytest.fixture
def small_polyhedron(small_box, small_state):
    # the box with a cap on the average yield move
    poly = small_box.to_polyhedral()
    row = np.concatenate([np.full(6, 1.0 / 6.0), np.zeros(3)])
    return poly.with_rows(row[None, :], [row @ small_state.stacked() + 0.001])


HISTORY_HEADER = ['date', '6m', '1y', '2y', '3y', '5y', '7y', '10y', '20y', '30y',
                  'AAA', 'AA', 'A', 'BBB']


def write_history(path, rows=30, seed=3):
    rng = np.random.default_rng(seed)
    base = np.array([4.0, 4.1, 4.2, 4.25, 4.3, 4.4, 4.5, 4.7, 4.8, 0.3, 0.5, 0.9, 1.5])
    noise = rng.normal(0.0, 0.05, size=(rows, base.shape[0]))
    lines = [','.join(HISTORY_HEADER)]
    for k in range(rows):
        date = f"2023-{1 + k // 28:02d}-{1 + k % 28:02d}"
        lines.append(','.join([date] + [f"{v:.4f}" for v in base + noise[k]]))
    path.write_text('\n'.join(lines) + '\n')


@pytest.fixture
def dataset_dir(tmp_path):
    data = tmp_path / 'data'
    data.mkdir()
    (data / 'universe.csv').write_text(
        "bond_id,rating,coupon_rate,periods_to_maturity,coupon_frequency,face_value\n"
        "SHORT,AAA,2.0,4,semiannual,100\n"
        "MID,A,3.5,14,semi-annual,100\n"
        "LONG,BBB,4.0,30,annual,100\n"
    )
    (data / 'weights.csv').write_text("bond_id,weight\nSHORT,0.5\nMID,0.3\nLONG,0.2\n")
    write_history(data / 'history.csv')
    return data


REPO_DATA = Path(__file__).resolve().parents[1] / 'data'
SYNTHETIC_HISTORY = Path(__file__).resolve().parent / 'data' / 'history.csv'


@pytest.fixture
def bundled_dataset_dir(tmp_path):
    """The bundled 20-bond universe next to a synthetic 60-day history."""
    data = tmp_path / 'bundled'
    data.mkdir()
    shutil.copy(REPO_DATA / 'universe.csv', data / 'universe.csv')
    shutil.copy(SYNTHETIC_HISTORY, data / 'history.csv')
    return data
