from typing import List, Optional, Sequence

import numpy as np

from config.settings import MEMBERSHIP_TOL
from src.arrays import as_matrix, as_vector, readonly
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram, add_second_order_cone
from src.errors import DimensionMismatchError, InvalidSetError
from src.uncertainty.base_set import UncertaintySet


class EllipsoidSet(UncertaintySet):
    """{ Z (mu + L w) : ||w||_2^2 <= radius_sq }.

    mu and L live in an m-dimensional space (m = T + n when no map is given);
    L is m x r with shape matrix L L^T. A zero-column L is a single point.
    """

    def __init__(self, mu, L, radius_sq: float, T: int, Z=None):
        mu = as_vector(mu, "ellipsoid center")
        L = np.asarray(L, dtype=float)
        if L.ndim == 1:
            L = L[:, None]
        L = as_matrix(L, "ellipsoid factor", (mu.shape[0], None))
        if not radius_sq > 0:
            raise InvalidSetError("ellipsoid radius_sq must be positive")
        if L.shape[1] > L.shape[0]:
            raise InvalidSetError("ellipsoid factor has more columns than rows")

        if Z is None:
            Z = np.eye(mu.shape[0])
        Z = as_matrix(Z, "ellipsoid map", (None, mu.shape[0]))
        if Z.shape[0] <= T:
            raise DimensionMismatchError(f"ellipsoid map has {Z.shape[0]} rows, expected more than T={T}")
        super().__init__(T, Z.shape[0] - T)

        self.mu = mu
        self.L = L
        self.radius_sq = float(radius_sq)
        self.Z = Z
        self.center = readonly(Z @ mu)
        self.factor = readonly(Z @ L)

    @property
    def rank(self) -> int:
        return self.L.shape[1]

    @property
    def radius(self) -> float:
        return float(np.sqrt(self.radius_sq))

    @classmethod
    def from_covariance(cls, mu, sigma, radius_sq: float, T: int) -> "EllipsoidSet":
        """{x : (x - mu)^T sigma^{-1} (x - mu) <= radius_sq} for positive definite sigma."""
        L = np.linalg.cholesky(np.asarray(sigma, dtype=float))
        return cls(mu, L, radius_sq, T)

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        if self.rank == 0:
            rows = [Affine.var(x[j], -1.0) + self.center[j] for j in range(self.dim)]
            return [prog.add_equality(rows, 'ellipsoid.embedding')]

        w = prog.add_variables(self.rank, 'ellipsoid.w')
        rows = [
            Affine.var(x[j], -1.0) + Affine.dot(self.factor[j], w, self.center[j])
            for j in range(self.dim)
        ]
        embedding = prog.add_equality(rows, 'ellipsoid.embedding')
        ball = add_second_order_cone(
            prog, self.radius, [Affine.var(wk) for wk in w], 'ellipsoid.ball'
        )
        return [embedding, ball]

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        offset = x - self.center
        if self.rank == 0:
            return bool(np.max(np.abs(offset)) <= tol)
        w, *_ = np.linalg.lstsq(self.factor, offset, rcond=None)
        if np.max(np.abs(self.factor @ w - offset)) > tol:
            return False
        return bool(np.linalg.norm(w) <= self.radius + tol)

    def support_value(self, d: np.ndarray) -> float:
        """min d^T x over the set."""
        d = np.asarray(d, dtype=float)
        return float(d @ self.center - self.radius * np.linalg.norm(self.factor.T @ d))

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the ellipsoid")
        value = Affine()
        for j, dj in enumerate(d):
            value = value - dj * self.center[j]
        if self.rank == 0:
            return value
        t = prog.add_variable(f'{name}.t')
        projected = [Affine() for _ in range(self.rank)]
        for j, dj in enumerate(d):
            for k in np.flatnonzero(self.factor[j]):
                projected[k] = projected[k] + dj * self.factor[j, k]
        add_second_order_cone(prog, Affine.var(t), projected, f'{name}.norm')
        return value + Affine.var(t, self.radius)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        if self.rank == 0:
            return np.tile(self.center, (k, 1))
        directions = rng.standard_normal((k, self.rank))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = self.radius * rng.uniform(size=(k, 1)) ** (1.0 / self.rank)
        return self.center + (directions * radii) @ self.factor.T

    def __repr__(self) -> str:
        return f"EllipsoidSet(rank={self.rank}, radius_sq={self.radius_sq:.4g}, T={self.T}, n={self.n})"
