import logging
from typing import List, Sequence

import numpy as np
from scipy.optimize import linprog

from config.settings import BOUNDEDNESS_LIMIT, MEMBERSHIP_TOL
from src.arrays import as_matrix, as_vector
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram
from src.errors import DimensionMismatchError, InvalidSetError
from src.uncertainty.base_set import UncertaintySet

logger = logging.getLogger(__name__)


class PolyhedralSet(UncertaintySet):
    """U = {x : A x <= b} over stacked (y, s)."""

    def __init__(self, A, b, T: int, check_bounded: bool = True):
        A = as_matrix(A, "polyhedron A")
        b = as_vector(b, "polyhedron b", A.shape[0])
        if A.shape[1] < T:
            raise DimensionMismatchError(f"A has {A.shape[1]} columns, fewer than T={T}")
        super().__init__(T, A.shape[1] - T)
        self.A = A
        self.b = b
        self._extremes = None
        if check_bounded:
            self.coordinate_extremes()

    @property
    def p(self) -> int:
        return self.A.shape[0]

    def coordinate_extremes(self) -> np.ndarray:
        """Minimizers and maximizers of every coordinate; raises if U is empty or unbounded."""
        if self._extremes is not None:
            return self._extremes

        points = []
        bounds = [(None, None)] * self.dim
        for j in range(self.dim):
            for sign in (1.0, -1.0):
                c = np.zeros(self.dim)
                c[j] = sign
                res = linprog(c, A_ub=self.A, b_ub=self.b, bounds=bounds, method='highs')
                if res.status == 2:
                    raise InvalidSetError("polyhedral uncertainty set is empty")
                if res.status == 3 or (res.status == 0 and abs(res.fun) > BOUNDEDNESS_LIMIT):
                    raise InvalidSetError(f"polyhedral uncertainty set is unbounded along coordinate {j}")
                if res.status != 0:
                    raise InvalidSetError(f"boundedness check failed: {res.message}")
                points.append(res.x)

        logger.debug("checked boundedness of %d-row polyhedron with %d LPs", self.p, 2 * self.dim)
        self._extremes = np.array(points)
        return self._extremes

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        return [prog.add_matrix_constraint(ConeKind.NONNEG, -self.A, x, self.b, 'polyhedron')]

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(np.all(self.A @ x <= self.b + tol))

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        # max -d^T x over A x <= b equals min b^T mu over A^T mu = -d, mu >= 0
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the polyhedron")
        mu = prog.add_variables(self.p, f'{name}.mu')
        prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(self.p), mu, name=f'{name}.mu_nonneg')
        rows = [Affine.dot(self.A[:, j], mu) + d[j] for j in range(self.dim)]
        prog.add_equality(rows, f'{name}.stationarity')
        return Affine.dot(self.b, mu)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        points = self.coordinate_extremes()
        weights = rng.dirichlet(np.ones(points.shape[0]), size=k)
        return weights @ points

    def with_rows(self, A_extra, b_extra) -> "PolyhedralSet":
        """The set intersected with A_extra x <= b_extra."""
        A_extra = np.atleast_2d(np.asarray(A_extra, dtype=float))
        return PolyhedralSet(
            np.vstack([self.A, A_extra]),
            np.concatenate([self.b, np.atleast_1d(b_extra)]),
            self.T
        )

    def __repr__(self) -> str:
        return f"PolyhedralSet(p={self.p}, T={self.T}, n={self.n})"
