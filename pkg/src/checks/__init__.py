from .random_instances import (
    Instance,
    random_box,
    random_box_duals,
    random_ellipsoid,
    random_hull,
    random_instance,
    random_polyhedron,
)
from .invariants import CheckResult, VerifyReport, run_invariant_suite

__all__ = [
    'Instance',
    'random_box',
    'random_box_duals',
    'random_ellipsoid',
    'random_hull',
    'random_instance',
    'random_polyhedron',
    'CheckResult',
    'VerifyReport',
    'run_invariant_suite',
]
