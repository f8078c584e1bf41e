from .worst_case_result import WorstCaseMethod, WorstCaseResult
from .worst_case import (
    held_terms,
    term_weights,
    worst_case_exact,
    worst_case_linearized,
    worst_case_scenarios,
)

__all__ = [
    'WorstCaseMethod',
    'WorstCaseResult',
    'held_terms',
    'term_weights',
    'worst_case_exact',
    'worst_case_linearized',
    'worst_case_scenarios',
]
