from .holdings import HoldingsSet, ObjectiveKind, ObjectiveSpec
from .duals import (
    FROZEN_ORIENTATION,
    DualVariables,
    EntropyOrientation,
    add_dual_feasibility,
    build_F_matrix,
    dual_objective,
    entropy_terms,
    maximize_dual,
)
from .robust_solution import (
    ConstructionMethod,
    RobustSolution,
    evaluate_holdings,
    solve_nominal,
)
from .dual_construction import as_polyhedral, robust_construct_constrained, robust_construct_dual
from .linearized_construction import robust_construct_linearized, sensitivity_exprs
from .cutting_plane import robust_construct_cutting_plane
from .saddle_check import SaddleReport, verify_saddle_point
from .router import robust_construct

__all__ = [
    'HoldingsSet',
    'ObjectiveKind',
    'ObjectiveSpec',
    'FROZEN_ORIENTATION',
    'DualVariables',
    'EntropyOrientation',
    'add_dual_feasibility',
    'build_F_matrix',
    'dual_objective',
    'entropy_terms',
    'maximize_dual',
    'ConstructionMethod',
    'RobustSolution',
    'evaluate_holdings',
    'solve_nominal',
    'as_polyhedral',
    'robust_construct_constrained',
    'robust_construct_dual',
    'robust_construct_linearized',
    'sensitivity_exprs',
    'robust_construct_cutting_plane',
    'SaddleReport',
    'verify_saddle_point',
    'robust_construct',
]
