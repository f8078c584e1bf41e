"""Dual form of the worst-case change over a polyhedron.

For U = {x : A x <= b} and terms k = (i, t) with c_{i,t} > 0,

    g(h, mu, nu) = -log(p^T h) - mu^T b - sum_k rel_entr(nu_k / t_k, c_k h_{i_k})

over mu >= 0, nu >= 0 with A^T mu = F^T nu and sum_k nu_k / t_k = 1, and -inf
elsewhere. Its maximum over (mu, nu) is the exact worst case. Entries of nu on
zero cash flows are held at zero.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.special import rel_entr

from src.analysis import WorstCaseResult
from src.arrays import as_vector
from src.conic import (
    Affine,
    ConeKind,
    ConeProgram,
    SolverSettings,
    add_relative_entropy,
    solve,
)
from src.errors import DimensionMismatchError, DomainError
from src.instruments import CashFlowMatrix
from src.uncertainty import PolyhedralSet

logger = logging.getLogger(__name__)

DUAL_FEASIBILITY_TOL = 1e-8


class EntropyOrientation(Enum):
    # rel_entr(nu / t, c h): the orientation that matches the exact worst case
    PRINTED = 'printed'
    # rel_entr(c h, nu / t): kept for the orientation check
    LISTING = 'listing'


FROZEN_ORIENTATION = EntropyOrientation.PRINTED


def build_F_matrix(n: int, T: int) -> np.ndarray:
    """nT x (T+n) map with (F (y, s))_{i*T+t} = y_t + s_i."""
    if n < 1 or T < 1:
        raise DomainError("build_F_matrix needs n, T >= 1")
    return np.hstack([np.tile(np.eye(T), (n, 1)), np.repeat(np.eye(n), T, axis=0)])


@dataclass(frozen=True)
class DualVariables:
    """Polyhedron multipliers mu (length p) and term weights nu (length nT, bond-major)."""

    mu: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", as_vector(self.mu, "mu"))
        object.__setattr__(self, "nu", as_vector(self.nu, "nu"))

    def nu_matrix(self, T: int) -> np.ndarray:
        return self.nu.reshape(-1, T)

    def normalization(self, T: int) -> float:
        """sum_k nu_k / t_k, equal to one at feasibility."""
        n = self.nu.shape[0] // T
        return float(self.nu @ np.tile(1.0 / np.arange(1, T + 1), n))

    def residual(self, poly: PolyhedralSet) -> float:
        F = build_F_matrix(poly.n, poly.T)
        return float(np.max(np.abs(poly.A.T @ self.mu - F.T @ self.nu)))

    @classmethod
    def from_worst_case(cls, result: WorstCaseResult, cf: CashFlowMatrix) -> "DualVariables":
        """mu from the set duals of an exact analysis, nu_{i,t} = t * q_{i,t} from its term weights."""
        if result.term_weights is None or not result.set_duals:
            raise DomainError("worst-case result carries no duals")
        nu = (result.term_weights * cf.periods[None, :]).ravel()
        return cls(np.maximum(result.set_dual_vector, 0.0), nu)


def _check_shapes(h: np.ndarray, poly: PolyhedralSet, cf: CashFlowMatrix) -> None:
    if poly.T != cf.T or poly.n != cf.n or h.shape[0] != cf.n:
        raise DimensionMismatchError("holdings, polyhedron and cash flows disagree in shape")


def entropy_terms(h: np.ndarray, nu: np.ndarray, cf: CashFlowMatrix,
                  orientation: EntropyOrientation = FROZEN_ORIENTATION) -> np.ndarray:
    weights = (h[:, None] * cf.c).ravel()
    scaled = nu / np.tile(cf.periods, cf.n)
    if orientation is EntropyOrientation.PRINTED:
        return rel_entr(scaled, weights)
    return rel_entr(weights, scaled)


def dual_objective(
    h,
    duals: DualVariables,
    poly: PolyhedralSet,
    cf: CashFlowMatrix,
    prices,
    orientation: EntropyOrientation = FROZEN_ORIENTATION,
    tol: float = DUAL_FEASIBILITY_TOL
) -> float:
    """g(h, mu, nu), or -inf when (mu, nu) is not dual feasible."""
    h = np.asarray(h, dtype=float)
    prices = np.asarray(prices, dtype=float)
    _check_shapes(h, poly, cf)
    if duals.mu.shape[0] != poly.p or duals.nu.shape[0] != cf.n * cf.T:
        raise DimensionMismatchError("dual variables do not match the problem size")

    value = float(prices @ h)
    if value <= 0:
        raise DomainError("dual objective needs p^T h > 0")

    mu, nu = duals.mu, duals.nu
    off_support = ~cf.support.ravel()
    feasible = (
        np.all(mu >= -tol)
        and np.all(nu >= -tol)
        and np.all(np.abs(nu[off_support]) <= tol)
        and abs(duals.normalization(cf.T) - 1.0) <= tol
        and duals.residual(poly) <= tol * max(1.0, np.abs(nu).max())
    )
    if not feasible:
        return -np.inf

    on_support = ~off_support
    terms = entropy_terms(h, np.maximum(nu, 0.0), cf, orientation)[on_support]
    return float(-np.log(value) - np.maximum(mu, 0.0) @ poly.b - terms.sum())


@dataclass(frozen=True)
class DualBlocks:
    mu: np.ndarray
    nu: np.ndarray
    r: np.ndarray
    bonds: np.ndarray
    periods: np.ndarray

    def penalty(self, b: np.ndarray) -> Affine:
        """mu^T b + sum_k r_k, i.e. -g - log(p^T h)."""
        return Affine.dot(b, self.mu) + Affine.total(self.r)

    def full_nu(self, values: np.ndarray, cf: CashFlowMatrix) -> np.ndarray:
        nu = np.zeros(cf.n * cf.T)
        nu[self.bonds * cf.T + self.periods] = values
        return nu


def add_dual_feasibility(
    prog: ConeProgram,
    poly: PolyhedralSet,
    cf: CashFlowMatrix,
    holdings_term,
    orientation: EntropyOrientation = FROZEN_ORIENTATION,
    name: str = 'dual'
) -> DualBlocks:
    """Dual variables over the cash-flow support with their cone constraints.

    holdings_term(i) gives h_i as an Affine: a program variable, or a constant for fixed holdings.
    """
    bonds, periods = cf.terms()
    K = bonds.shape[0]
    T = cf.T

    mu = prog.add_variables(poly.p, f'{name}.mu')
    nu = prog.add_variables(K, f'{name}.nu')
    r = prog.add_variables(K, f'{name}.r')
    prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(poly.p), mu, name=f'{name}.mu_nonneg')
    prog.add_matrix_constraint(ConeKind.NONNEG, np.eye(K), nu, name=f'{name}.nu_nonneg')

    # A^T mu - F^T nu = 0, one row per coordinate of (y, s)
    rows = []
    for j in range(poly.dim):
        if j < T:
            hit = np.flatnonzero(periods == j)
        else:
            hit = np.flatnonzero(bonds == j - T)
        expr = Affine.dot(poly.A[:, j], mu) - Affine.total(nu[hit])
        rows.append(expr)
    prog.add_equality(rows, f'{name}.stationarity')

    t = periods + 1.0
    prog.add_equality([Affine.dot(1.0 / t, nu, -1.0)], f'{name}.normalization')

    for k in range(K):
        weight = holdings_term(bonds[k]) * cf.c[bonds[k], periods[k]]
        scaled = Affine.var(nu[k], 1.0 / t[k])
        if orientation is EntropyOrientation.PRINTED:
            add_relative_entropy(prog, scaled, weight, Affine.var(r[k]), f'{name}.entropy{k}')
        else:
            add_relative_entropy(prog, weight, scaled, Affine.var(r[k]), f'{name}.entropy{k}')

    return DualBlocks(mu, nu, r, bonds, periods)


def maximize_dual(
    h,
    poly: PolyhedralSet,
    cf: CashFlowMatrix,
    prices,
    orientation: EntropyOrientation = FROZEN_ORIENTATION,
    settings: Optional[SolverSettings] = None
) -> Tuple[float, DualVariables]:
    """max over (mu, nu) of g(h, mu, nu) for fixed holdings."""
    h = np.asarray(h, dtype=float)
    prices = np.asarray(prices, dtype=float)
    _check_shapes(h, poly, cf)
    value = float(prices @ h)
    if value <= 0:
        raise DomainError("dual objective needs p^T h > 0")

    prog = ConeProgram('maximize_dual')
    blocks = add_dual_feasibility(prog, poly, cf, lambda i: Affine.constant(h[i]), orientation)
    prog.set_objective(blocks.penalty(poly.b) + np.log(value))

    result = solve(prog, settings).raise_for_status('dual maximization')
    duals = DualVariables(
        np.maximum(result.values(blocks.mu), 0.0),
        blocks.full_nu(np.maximum(result.values(blocks.nu), 0.0), cf)
    )
    logger.debug("dual maximum %.10f", -result.objective)
    return -result.objective, duals
