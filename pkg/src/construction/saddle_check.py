import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.settings import DEFAULT_SEED, SADDLE_SAMPLES, SADDLE_SLACK
from src.construction.holdings import HoldingsSet, ObjectiveSpec
from src.construction.robust_solution import RobustSolution
from src.instruments import CashFlowMatrix, MarketState, Portfolio, delta
from src.uncertainty import UncertaintySet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SaddleReport:
    """Largest violations of the two saddle inequalities over the sampled points."""

    state_violation: float
    holdings_violation: float
    state_samples: int
    holdings_samples: int
    slack: float

    @property
    def max_violation(self) -> float:
        return max(self.state_violation, self.holdings_violation)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.slack


def verify_saddle_point(
    sol: RobustSolution,
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    samples: int = SADDLE_SAMPLES,
    rng: Optional[np.random.Generator] = None,
    slack: float = SADDLE_SLACK
) -> SaddleReport:
    """Check L(h*, m) <= L(h*, m*) <= L(h, m*) for L(h, m) = phi(h) - lam * delta(h, m).

    States m are sampled from the set and holdings h from the holdings set;
    violations are reported as positive numbers.
    """
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    h_star, m_star = sol.h_star, sol.worst_state

    def loss(port: Portfolio, m: MarketState) -> float:
        robust = obj.lam * delta(cf, m, m_nom, port) if obj.lam else 0.0
        return obj.value(port.h) - robust

    at_saddle = loss(h_star, m_star)

    state_violation = 0.0
    states = uset.sample_states(rng, samples) if obj.lam else []
    for m in states:
        state_violation = max(state_violation, loss(h_star, m) - at_saddle)

    holdings = hset.sample(rng, samples)
    holdings_violation = 0.0
    for h in holdings:
        holdings_violation = max(holdings_violation, at_saddle - loss(Portfolio(h), m_star))

    report = SaddleReport(state_violation, holdings_violation, len(states), len(holdings), slack)
    logger.debug("saddle check: state %.2e, holdings %.2e", state_violation, holdings_violation)
    return report
