from .base_set import UncertaintySet
from .box_set import BoxSet
from .ellipsoid_set import EllipsoidSet
from .factor_set import FactorSet
from .history import (
    HistoryPanel,
    box_from_history,
    chi2_quantile,
    covariance_factor,
    ellipsoid_from_history,
    nominal_state,
)
from .key_rates import key_rate_map, key_tenor_periods
from .perturbation import (
    PerturbationBlock,
    PerturbationSet,
    PerturbationSpec,
    first_differences,
    perturbation_constraints,
)
from .polyhedral_set import PolyhedralSet
from .scenario_hull import ScenarioHull

__all__ = [
    'UncertaintySet',
    'BoxSet',
    'EllipsoidSet',
    'FactorSet',
    'PolyhedralSet',
    'ScenarioHull',
    'PerturbationBlock',
    'PerturbationSet',
    'PerturbationSpec',
    'first_differences',
    'perturbation_constraints',
    'HistoryPanel',
    'box_from_history',
    'chi2_quantile',
    'covariance_factor',
    'ellipsoid_from_history',
    'nominal_state',
    'key_rate_map',
    'key_tenor_periods',
]
