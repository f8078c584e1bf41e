from .affine import Affine, affine_rows, as_affine
from .cone_program import (
    ConeBlock,
    ConeKind,
    ConeProgram,
    LseHandles,
    add_lse_epigraph,
    add_relative_entropy,
    add_second_order_cone,
    cone_violation,
)
from .program_dump import dump_program, load_program
from .solve_result import SolveResult, SolveStatus
from .solver import ClarabelSolver, ConeSolver, SolverSettings, solve

__all__ = [
    'Affine',
    'affine_rows',
    'as_affine',
    'ConeBlock',
    'ConeKind',
    'ConeProgram',
    'LseHandles',
    'add_lse_epigraph',
    'add_relative_entropy',
    'add_second_order_cone',
    'cone_violation',
    'dump_program',
    'load_program',
    'SolveResult',
    'SolveStatus',
    'ClarabelSolver',
    'ConeSolver',
    'SolverSettings',
    'solve',
]
