import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from config.settings import (
    SOLVER_MAX_ITER,
    SOLVER_TIME_LIMIT,
    SOLVER_TOL_ACCEPTED,
    SOLVER_TOL_REQUESTED,
    SOLVER_VERBOSE,
)
from src.conic.cone_program import ConeKind, ConeProgram
from src.conic.solve_result import SolveResult, SolveStatus
from src.errors import BackendUnavailableError, MalformedProgramError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverSettings:
    tol_requested: float = SOLVER_TOL_REQUESTED
    tol_accepted: float = SOLVER_TOL_ACCEPTED
    max_iter: int = SOLVER_MAX_ITER
    time_limit: float = SOLVER_TIME_LIMIT
    verbose: bool = SOLVER_VERBOSE

    def with_tolerance(self, tol: float) -> "SolverSettings":
        return SolverSettings(tol, max(tol, self.tol_accepted), self.max_iter,
                              self.time_limit, self.verbose)


class ConeSolver(ABC):
    name = 'abstract'

    @abstractmethod
    def solve(self, prog: ConeProgram, settings: SolverSettings) -> SolveResult:
        pass


_CLARABEL_STATUS = {
    'Solved': (SolveStatus.OPTIMAL, False),
    'AlmostSolved': (SolveStatus.OPTIMAL, True),
    'PrimalInfeasible': (SolveStatus.INFEASIBLE, False),
    'AlmostPrimalInfeasible': (SolveStatus.INFEASIBLE, True),
    'DualInfeasible': (SolveStatus.UNBOUNDED, False),
    'AlmostDualInfeasible': (SolveStatus.UNBOUNDED, True),
}


class ClarabelSolver(ConeSolver):
    """Interior-point backend. Clarabel takes A x + s = b, s in K, so A = -G and b = g."""

    name = 'clarabel'

    def _load_backend(self):
        try:
            import clarabel
        except ImportError as e:
            raise BackendUnavailableError(
                "clarabel is not installed; install it with: pip install clarabel",
                'backend_unavailable'
            ) from e
        return clarabel

    def _cones(self, clarabel, prog: ConeProgram) -> list:
        cones = []
        for block in prog.blocks:
            if block.kind is ConeKind.ZERO:
                cones.append(clarabel.ZeroConeT(block.dim))
            elif block.kind is ConeKind.NONNEG:
                cones.append(clarabel.NonnegativeConeT(block.dim))
            elif block.kind is ConeKind.SECOND_ORDER:
                cones.append(clarabel.SecondOrderConeT(block.dim))
            else:
                cones.extend(clarabel.ExponentialConeT() for _ in range(block.dim // 3))
        return cones

    def _settings(self, clarabel, settings: SolverSettings):
        opts = clarabel.DefaultSettings()
        opts.verbose = settings.verbose
        opts.max_iter = settings.max_iter
        opts.time_limit = settings.time_limit
        opts.tol_gap_abs = settings.tol_requested
        opts.tol_gap_rel = settings.tol_requested
        opts.tol_feas = settings.tol_requested
        opts.reduced_tol_gap_abs = settings.tol_accepted
        opts.reduced_tol_gap_rel = settings.tol_accepted
        opts.reduced_tol_feas = settings.tol_accepted
        return opts

    def solve(self, prog: ConeProgram, settings: SolverSettings) -> SolveResult:
        clarabel = self._load_backend()
        if prog.num_vars == 0 or prog.num_rows == 0:
            raise MalformedProgramError("program needs at least one variable and one constraint")

        c, c0 = prog.objective_vector()
        G, g = prog.constraint_matrix()
        P = sparse.csc_matrix((prog.num_vars, prog.num_vars))
        solver = clarabel.DefaultSolver(
            P, c, (-G).tocsc(), g, self._cones(clarabel, prog), self._settings(clarabel, settings)
        )
        solution = solver.solve()

        backend_status = str(solution.status).split('.')[-1]
        status, reduced = _CLARABEL_STATUS.get(backend_status, (SolveStatus.NUMERICAL_LIMIT, False))
        x = np.asarray(solution.x, dtype=float)
        z = np.asarray(solution.z, dtype=float)
        return SolveResult(
            status=status,
            x=x,
            z=z,
            objective=float(c @ x + c0),
            primal_residual=float(solution.r_prim),
            dual_residual=float(solution.r_dual),
            solve_time=float(solution.solve_time),
            iterations=int(solution.iterations),
            reduced_accuracy=reduced,
            backend_status=backend_status,
            block_duals={block.name: z[block.rows].copy() for block in prog.blocks}
        )


_default_solver: ConeSolver = ClarabelSolver()


def solve(prog: ConeProgram, settings: Optional[SolverSettings] = None,
          solver: Optional[ConeSolver] = None) -> SolveResult:
    settings = settings or SolverSettings()
    solver = solver or _default_solver
    result = solver.solve(prog, settings)

    logger.debug(
        "%s: %s after %d iterations, objective %.10g, residuals %.2e/%.2e",
        prog.name, result.backend_status, result.iterations, result.objective,
        result.primal_residual, result.dual_residual
    )
    if result.is_optimal and result.reduced_accuracy:
        logger.warning(
            "%s solved only to the accepted tolerance %.0e", prog.name, settings.tol_accepted
        )
    return result
