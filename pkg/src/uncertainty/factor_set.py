from typing import List, Sequence

import numpy as np

from config.settings import MEMBERSHIP_TOL
from src.arrays import as_matrix, as_vector
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram, add_second_order_cone, solve
from src.errors import DimensionMismatchError, InvalidSetError
from src.uncertainty.base_set import UncertaintySet


class FactorSet(UncertaintySet):
    """{ Z f + v : f_min <= f <= f_max, ||D^{-1} v||_2 <= 1 } with D = diag(scale)."""

    def __init__(self, Z, f_min, f_max, scale, T: int):
        Z = as_matrix(Z, "factor loadings")
        f_min = as_vector(f_min, "f_min", Z.shape[1])
        f_max = as_vector(f_max, "f_max", Z.shape[1])
        scale = as_vector(scale, "idiosyncratic scale", Z.shape[0])
        if Z.shape[0] < T:
            raise DimensionMismatchError(f"factor loadings have {Z.shape[0]} rows, fewer than T={T}")
        if np.any(f_min > f_max):
            raise InvalidSetError("factor bounds must satisfy f_min <= f_max")
        if np.any(scale <= 0):
            raise InvalidSetError("idiosyncratic scales must be positive")
        super().__init__(T, Z.shape[0] - T)
        self.Z = Z
        self.f_min = f_min
        self.f_max = f_max
        self.scale = scale

    @property
    def k(self) -> int:
        return self.Z.shape[1]

    def _add_factor_rows(self, prog: ConeProgram, x: np.ndarray, tag: str) -> tuple:
        f = prog.add_variables(self.k, f'{tag}.f')
        w = prog.add_variables(self.dim, f'{tag}.w')
        # x = Z f + D w with ||w|| <= 1
        rows = [
            Affine.var(x[j], -1.0) + Affine.dot(self.Z[j], f) + Affine.var(w[j], self.scale[j])
            for j in range(self.dim)
        ]
        embedding = prog.add_equality(rows, f'{tag}.embedding')
        eye = np.eye(self.k)
        upper = prog.add_matrix_constraint(ConeKind.NONNEG, -eye, f, self.f_max, f'{tag}.f_upper')
        lower = prog.add_matrix_constraint(ConeKind.NONNEG, eye, f, -self.f_min, f'{tag}.f_lower')
        return f, w, [embedding, upper, lower]

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        _, w, blocks = self._add_factor_rows(prog, x, 'factor')
        ball = add_second_order_cone(prog, 1.0, [Affine.var(j) for j in w], 'factor.idiosyncratic')
        return blocks + [ball]

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        # smallest idiosyncratic norm that explains x
        prog = ConeProgram('factor.membership')
        xv = prog.add_variables(self.dim, 'x')
        prog.add_matrix_constraint(ConeKind.ZERO, np.eye(self.dim), xv, -np.asarray(x, dtype=float))
        _, w, _ = self._add_factor_rows(prog, xv, 'factor')
        r = prog.add_variable('r')
        add_second_order_cone(prog, Affine.var(r), [Affine.var(j) for j in w])
        prog.set_objective(Affine.var(r))
        result = solve(prog)
        return bool(result.is_optimal and result.objective <= 1.0 + tol)

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the factor set")
        # max -d^T (Z f + D w) = sum_j max(-g_j f_min_j, -g_j f_max_j) + ||D d||, g = Z^T d
        e = prog.add_variables(self.k, f'{name}.e')
        rows = []
        for col in range(self.k):
            g = Affine()
            for j in np.flatnonzero(self.Z[:, col]):
                g = g + d[j] * self.Z[j, col]
            rows.append(Affine.var(e[col]) + g * self.f_min[col])
            rows.append(Affine.var(e[col]) + g * self.f_max[col])
        prog.add_nonneg(rows, f'{name}.factors')
        t = prog.add_variable(f'{name}.t')
        add_second_order_cone(prog, Affine.var(t), [d[j] * self.scale[j] for j in range(self.dim)],
                              f'{name}.idiosyncratic')
        return Affine.total(e) + Affine.var(t)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        f = rng.uniform(self.f_min, self.f_max, size=(k, self.k))
        w = rng.standard_normal((k, self.dim))
        w *= rng.uniform(size=(k, 1)) ** (1.0 / self.dim) / np.linalg.norm(w, axis=1, keepdims=True)
        return f @ self.Z.T + w * self.scale

    def __repr__(self) -> str:
        return f"FactorSet(k={self.k}, T={self.T}, n={self.n})"
