from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from config.settings import MEMBERSHIP_TOL
from src.arrays import as_vector
from src.conic import Affine, ConeBlock, ConeKind, ConeProgram, add_second_order_cone
from src.errors import DimensionMismatchError, InvalidSetError
from src.instruments import MarketState
from src.uncertainty.base_set import UncertaintySet


@dataclass(frozen=True)
class PerturbationSpec:
    """Yield perturbation delta = y - base.y with bounds, a mean-square budget and a roughness budget.

    kappa and omega are optional; None leaves that budget out.
    """

    delta_min: np.ndarray
    delta_max: np.ndarray
    base: MarketState
    kappa: Optional[float] = None
    omega: Optional[float] = None

    def __post_init__(self):
        delta_min = as_vector(self.delta_min, "delta_min", self.base.T)
        delta_max = as_vector(self.delta_max, "delta_max", self.base.T)
        if np.any(delta_min > delta_max):
            raise InvalidSetError("perturbation bounds must satisfy delta_min <= delta_max")
        if self.kappa is not None and self.kappa < 0:
            raise InvalidSetError("kappa must be nonnegative")
        if self.omega is not None and self.omega < 0:
            raise InvalidSetError("omega must be nonnegative")
        object.__setattr__(self, "delta_min", delta_min)
        object.__setattr__(self, "delta_max", delta_max)

    @property
    def T(self) -> int:
        return self.base.T


def first_differences(T: int) -> np.ndarray:
    """(T-1) x T matrix with rows e_{t+1} - e_t."""
    D = np.zeros((max(T - 1, 0), T))
    for t in range(T - 1):
        D[t, t] = -1.0
        D[t, t + 1] = 1.0
    return D


@dataclass(frozen=True)
class PerturbationBlock:
    bound_A: np.ndarray
    bound_b: np.ndarray
    kappa: Optional[float]
    omega: Optional[float]
    roughness: np.ndarray

    @property
    def is_polyhedral(self) -> bool:
        return self.kappa is None and (self.omega is None or self.roughness.shape[0] == 0)

    def add_to_program(self, prog: ConeProgram, delta: Sequence[Affine]) -> List[ConeBlock]:
        T = len(delta)
        bound_rows = []
        for r in range(self.bound_A.shape[0]):
            expr = Affine.constant(self.bound_b[r])
            for t in np.flatnonzero(self.bound_A[r]):
                expr = expr - delta[t] * self.bound_A[r, t]
            bound_rows.append(expr)
        blocks = [prog.add_nonneg(bound_rows, 'perturbation.bounds')]

        if self.kappa is not None:
            blocks.append(add_second_order_cone(
                prog, np.sqrt(self.kappa), list(delta), 'perturbation.mean_square'
            ))
        if self.omega is not None and T > 1:
            diffs = [delta[t + 1] - delta[t] for t in range(T - 1)]
            blocks.append(add_second_order_cone(
                prog, np.sqrt(self.omega), diffs, 'perturbation.roughness'
            ))
        return blocks

    def satisfied(self, delta: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        if np.any(self.bound_A @ delta > self.bound_b + tol):
            return False
        if self.kappa is not None and np.linalg.norm(delta) > np.sqrt(self.kappa) + tol:
            return False
        if self.omega is not None and self.roughness.shape[0] > 0:
            if np.linalg.norm(self.roughness @ delta) > np.sqrt(self.omega) + tol:
                return False
        return True


def perturbation_constraints(spec: PerturbationSpec) -> PerturbationBlock:
    """Bound rows (delta <= delta_max, then -delta <= -delta_min) plus optional cone budgets."""
    eye = np.eye(spec.T)
    return PerturbationBlock(
        bound_A=np.vstack([eye, -eye]),
        bound_b=np.concatenate([spec.delta_max, -spec.delta_min]),
        kappa=spec.kappa,
        omega=spec.omega,
        roughness=first_differences(spec.T)
    )


class PerturbationSet(UncertaintySet):
    """Yields within a perturbation spec around base.y; spreads pinned to base.s."""

    def __init__(self, spec: PerturbationSpec):
        super().__init__(spec.base.T, spec.base.n)
        self.spec = spec
        self.block = perturbation_constraints(spec)

    def add_to_program(self, prog: ConeProgram, x: np.ndarray) -> List[ConeBlock]:
        base = self.spec.base
        delta = [Affine.var(x[t]) - base.y[t] for t in range(self.T)]
        blocks = self.block.add_to_program(prog, delta)
        if self.n:
            pins = [Affine.var(x[self.T + i]) - base.s[i] for i in range(self.n)]
            blocks.append(prog.add_equality(pins, 'perturbation.spreads'))
        return blocks

    def contains_stacked(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        base = self.spec.base
        if np.any(np.abs(x[self.T:] - base.s) > tol):
            return False
        return self.block.satisfied(x[:self.T] - base.y, tol)

    def linear_support(self, prog: ConeProgram, d: Sequence[Affine], name: str) -> Affine:
        if len(d) != self.dim:
            raise DimensionMismatchError("direction length does not match the perturbation set")
        base, spec, T = self.spec.base, self.spec, self.T
        nominal = base.stacked()
        value = Affine()
        for j, dj in enumerate(d):
            value = value - dj * nominal[j]

        # dual of max -d_y^T delta over the bounds and budgets
        upper = prog.add_variables(T, f'{name}.upper')
        lower = prog.add_variables(T, f'{name}.lower')
        prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(2 * T), np.concatenate([upper, lower]),
                                   name=f'{name}.bound_duals')
        stationarity = [Affine({upper[t]: 1.0, lower[t]: -1.0}) + d[t] for t in range(T)]
        value = value + Affine.dot(spec.delta_max, upper) - Affine.dot(spec.delta_min, lower)

        if spec.kappa is not None:
            u = prog.add_variables(T, f'{name}.u_kappa')
            t1 = prog.add_variable(f'{name}.t_kappa')
            add_second_order_cone(prog, Affine.var(t1), [Affine.var(k) for k in u], f'{name}.kappa')
            stationarity = [row + Affine.var(u[t]) for t, row in enumerate(stationarity)]
            value = value + Affine.var(t1, np.sqrt(spec.kappa))
        if spec.omega is not None and T > 1:
            D = self.block.roughness
            u = prog.add_variables(T - 1, f'{name}.u_omega')
            t2 = prog.add_variable(f'{name}.t_omega')
            add_second_order_cone(prog, Affine.var(t2), [Affine.var(k) for k in u], f'{name}.omega')
            stationarity = [row + Affine.dot(D[:, t], u) for t, row in enumerate(stationarity)]
            value = value + Affine.var(t2, np.sqrt(spec.omega))

        prog.add_equality(stationarity, f'{name}.stationarity')
        return value

    def to_polyhedral(self):
        """2T yield bound rows followed by 2n spread-pinning rows; only without cone budgets."""
        from src.uncertainty.polyhedral_set import PolyhedralSet

        if not self.block.is_polyhedral:
            raise InvalidSetError("perturbation sets with cone budgets are not polyhedral")
        base = self.spec.base
        A = np.zeros((2 * self.T + 2 * self.n, self.dim))
        A[:2 * self.T, :self.T] = self.block.bound_A
        b = np.concatenate([self.block.bound_b + np.concatenate([base.y, -base.y]), base.s, -base.s])
        if self.n:
            eye = np.eye(self.n)
            A[2 * self.T:, self.T:] = np.vstack([eye, -eye])
        return PolyhedralSet(A, b, self.T, check_bounded=False)

    def sample(self, rng: np.random.Generator, k: int) -> np.ndarray:
        if self.block.is_polyhedral:
            return self.to_polyhedral().sample(rng, k)
        return super().sample(rng, k)

    def __repr__(self) -> str:
        return (f"PerturbationSet(T={self.T}, n={self.n}, "
                f"kappa={self.spec.kappa}, omega={self.spec.omega})")
