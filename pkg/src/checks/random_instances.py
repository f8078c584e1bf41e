from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.settings import DEFAULT_BUDGET, VERIFY_MAX_BONDS, VERIFY_MAX_PERIODS
from src.instruments import CashFlowMatrix, MarketState, Portfolio, price_bonds
from src.uncertainty import BoxSet, EllipsoidSet, PolyhedralSet, ScenarioHull


@dataclass(frozen=True)
class Instance:
    cf: CashFlowMatrix
    m_nom: MarketState
    port: Portfolio

    @property
    def prices(self) -> np.ndarray:
        return price_bonds(self.cf, self.m_nom)

    @property
    def budget(self) -> float:
        return float(self.prices @ self.port.h)


def random_instance(rng: np.random.Generator, max_bonds: int = VERIFY_MAX_BONDS,
                    max_periods: int = VERIFY_MAX_PERIODS, min_periods: int = 2,
                    budget: float = DEFAULT_BUDGET) -> Instance:
    """Bonds with random coupons and maturities, an upward-ish curve and small spreads."""
    n = int(rng.integers(1, max_bonds + 1))
    T = int(rng.integers(min_periods, max_periods + 1))
    maturities = rng.integers(1, T + 1, size=n)
    maturities[rng.integers(n)] = T
    cf = CashFlowMatrix.from_bond_terms(
        rng.uniform(0.0, 6.0, size=n),
        maturities,
        rng.choice([1, 2], size=n),
        T=T
    )
    y = np.sort(rng.uniform(0.005, 0.03, size=T))
    s = rng.uniform(0.0, 0.01, size=n)
    m_nom = MarketState(y, s)
    weights = rng.dirichlet(np.ones(n))
    port = Portfolio.from_value_weights(weights, price_bonds(cf, m_nom), budget)
    return Instance(cf, m_nom, port)


def random_box(rng: np.random.Generator, m_nom: MarketState, width: float = 0.005) -> BoxSet:
    dy = rng.uniform(0.2, 1.0, size=m_nom.T) * width
    ds = rng.uniform(0.2, 1.0, size=m_nom.n) * width
    return BoxSet.around(m_nom, dy, ds)


def random_polyhedron(rng: np.random.Generator, m_nom: MarketState, width: float = 0.005,
                      cuts: int = 3) -> PolyhedralSet:
    """A box around m_nom intersected with random half-spaces that keep m_nom inside."""
    box = random_box(rng, m_nom, width).to_polyhedral()
    A = rng.standard_normal((cuts, m_nom.dim))
    b = A @ m_nom.stacked() + rng.uniform(0.2, 1.0, size=cuts) * width
    return box.with_rows(A, b)


def random_ellipsoid(rng: np.random.Generator, m_nom: MarketState, width: float = 0.005,
                     rank: int = 3) -> EllipsoidSet:
    rank = min(rank, m_nom.dim)
    L = rng.standard_normal((m_nom.dim, rank)) * width / np.sqrt(rank)
    return EllipsoidSet(m_nom.stacked(), L, 1.0, m_nom.T)


def random_hull(rng: np.random.Generator, m_nom: MarketState, width: float = 0.005,
                count: int = 4) -> ScenarioHull:
    points = m_nom.stacked() + rng.uniform(-width, width, size=(count, m_nom.dim))
    return ScenarioHull(points, m_nom.T)


def random_box_duals(rng: np.random.Generator, box: BoxSet, cf: CashFlowMatrix,
                     slack: float = 0.1) -> Tuple[np.ndarray, np.ndarray]:
    """Dual-feasible (mu, nu) for box.to_polyhedral().

    nu = t * q for q on the simplex over the cash-flow support; mu splits F^T nu
    between the upper rows and a common nonnegative excess on both sides.
    """
    bonds, periods = cf.terms()
    q = rng.dirichlet(np.ones(bonds.shape[0]))
    nu = np.zeros(cf.n * cf.T)
    nu[bonds * cf.T + periods] = (periods + 1.0) * q

    Fnu = np.concatenate([
        nu.reshape(cf.n, cf.T).sum(axis=0),
        nu.reshape(cf.n, cf.T).sum(axis=1),
    ])
    excess = rng.uniform(0.0, slack, size=Fnu.shape[0])
    return np.concatenate([Fnu + excess, excess]), nu
