from typing import List, Optional, Sequence

import numpy as np

from config.settings import MEMBERSHIP_TOL
from src.arrays import as_vector
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram
from src.errors import DimensionMismatchError, InvalidSetError
from src.instruments import MarketState
from src.uncertainty.base_set import UncertaintySet


class BoxSet(UncertaintySet):
    def __init__(self, y_min, y_max, s_min, s_max):
        y_min = as_vector(y_min, "y_min")
        y_max = as_vector(y_max, "y_max", y_min.shape[0])
        s_min = as_vector(s_min, "s_min")
        s_max = as_vector(s_max, "s_max", s_min.shape[0])
        super().__init__(y_min.shape[0], s_min.shape[0])

        if np.any(y_min > y_max) or np.any(s_min > s_max):
            raise InvalidSetError("box bounds must satisfy min <= max elementwise")

        self.y_min, self.y_max = y_min, y_max
        self.s_min, self.s_max = s_min, s_max
        self.lower = np.concatenate([y_min, s_min])
        self.upper = np.concatenate([y_max, s_max])

    @classmethod
    def around(cls, m_nom: MarketState, dy, ds) -> "BoxSet":
        """Symmetric box m_nom +/- (dy, ds); dy and ds are scalars or vectors."""
        dy = np.broadcast_to(np.asarray(dy, dtype=float), (m_nom.T,))
        ds = np.broadcast_to(np.asarray(ds, dtype=float), (m_nom.n,))
        return cls(m_nom.y - dy, m_nom.y + dy, m_nom.s - ds, m_nom.s + ds)

    @classmethod
    def singleton(cls, m: MarketState) -> "BoxSet":
        return cls(m.y, m.y, m.s, m.s)

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        eye = np.eye(self.dim)
        upper = prog.add_matrix_constraint(ConeKind.NONNEG, -eye, x, self.upper, 'box.upper')
        lower = prog.add_matrix_constraint(ConeKind.NONNEG, eye, x, -self.lower, 'box.lower')
        return [upper, lower]

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the box")
        e = prog.add_variables(self.dim, f'{name}.e')
        rows = []
        for j, dj in enumerate(d):
            rows.append(Affine.var(e[j]) + dj * self.lower[j])
            rows.append(Affine.var(e[j]) + dj * self.upper[j])
        prog.add_nonneg(rows, f'{name}.box')
        return Affine.total(e)

    def maximum_element(self) -> Optional[MarketState]:
        return MarketState(self.y_max, self.s_max)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(k, self.dim))

    def to_polyhedral(self):
        """Same set as A x <= b: upper rows first, then lower rows."""
        from src.uncertainty.polyhedral_set import PolyhedralSet

        eye = np.eye(self.dim)
        return PolyhedralSet(
            np.vstack([eye, -eye]),
            np.concatenate([self.upper, -self.lower]),
            self.T,
            check_bounded=False
        )

    def __repr__(self) -> str:
        return f"BoxSet(T={self.T}, n={self.n})"
