"""Cone program builder.

A program is ``minimize c^T x + c0`` subject to blocks ``G_k x + g_k in K_k``.
Every block is an affine map into one cone:

    ZERO         G x + g = 0
    NONNEG       G x + g >= 0
    SECOND_ORDER (t, v) with ||v||_2 <= t
    EXPONENTIAL  triples (x, y, z) in closure{y > 0, y exp(x / y) <= z}

Exponential blocks hold one or more triples stacked in order. Rows are kept in
insertion order so identical inputs give identical programs.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import sparse

from src.conic.affine import Affine, as_affine
from src.errors import MalformedProgramError


class ConeKind(Enum):
    ZERO = 'zero'
    NONNEG = 'nonneg'
    SECOND_ORDER = 'soc'
    EXPONENTIAL = 'exp'


@dataclass(frozen=True)
class ConeBlock:
    name: str
    kind: ConeKind
    row_start: int
    dim: int

    @property
    def rows(self) -> slice:
        return slice(self.row_start, self.row_start + self.dim)


@dataclass(frozen=True)
class LseHandles:
    budget: ConeBlock
    terms: ConeBlock
    weights: np.ndarray


class ConeProgram:
    def __init__(self, name: str = 'program'):
        self.name = name
        self.num_vars = 0
        self.var_names: List[Tuple[str, int, int]] = []
        self.objective = Affine()
        self.blocks: List[ConeBlock] = []
        self._rows: List[int] = []
        self._cols: List[int] = []
        self._vals: List[float] = []
        self._offsets: List[float] = []

    @property
    def num_rows(self) -> int:
        return len(self._offsets)

    def add_variables(self, count: int, name: str = 'x') -> np.ndarray:
        if count < 0:
            raise MalformedProgramError("variable count must be nonnegative")
        start = self.num_vars
        self.num_vars += count
        self.var_names.append((name, start, count))
        return np.arange(start, start + count)

    def add_variable(self, name: str = 'x') -> int:
        return int(self.add_variables(1, name)[0])

    def set_objective(self, expr) -> None:
        expr = as_affine(expr)
        self._check_indices(expr)
        self.objective = expr

    def add_constraint(self, kind: ConeKind, rows: Sequence, name: str = '') -> ConeBlock:
        rows = [as_affine(r) for r in rows]
        if not rows:
            raise MalformedProgramError(f"constraint block '{name}' has no rows")
        if kind is ConeKind.EXPONENTIAL and len(rows) % 3 != 0:
            raise MalformedProgramError("exponential blocks are made of triples")
        if kind is ConeKind.SECOND_ORDER and len(rows) < 1:
            raise MalformedProgramError("second-order blocks need a bound row")

        block = ConeBlock(name or f'{kind.value}{len(self.blocks)}', kind, self.num_rows, len(rows))
        for expr in rows:
            self._check_indices(expr)
            row = len(self._offsets)
            for j, a in expr.coefs.items():
                self._rows.append(row)
                self._cols.append(j)
                self._vals.append(a)
            self._offsets.append(expr.const)
        self.blocks.append(block)
        return block

    def add_matrix_constraint(self, kind: ConeKind, G, indices: Sequence[int], g=None,
                              name: str = '') -> ConeBlock:
        """Block G @ x[indices] + g in K, with G dense or sparse."""
        G = sparse.coo_matrix(G)
        indices = np.asarray(indices, dtype=int)
        g = np.zeros(G.shape[0]) if g is None else np.asarray(g, dtype=float)
        if G.shape[1] != indices.shape[0] or g.shape[0] != G.shape[0]:
            raise MalformedProgramError(f"block '{name}' has inconsistent shapes")
        rows = [Affine(None, g[r]) for r in range(G.shape[0])]
        for r, c, v in zip(G.row, G.col, G.data):
            rows[r].coefs[int(indices[c])] = rows[r].coefs.get(int(indices[c]), 0.0) + float(v)
        return self.add_constraint(kind, rows, name)

    def add_equality(self, rows: Sequence, name: str = '') -> ConeBlock:
        return self.add_constraint(ConeKind.ZERO, rows, name)

    def add_nonneg(self, rows: Sequence, name: str = '') -> ConeBlock:
        return self.add_constraint(ConeKind.NONNEG, rows, name)

    def _check_indices(self, expr: Affine) -> None:
        if expr.max_index >= self.num_vars or any(j < 0 for j in expr.coefs):
            raise MalformedProgramError(
                f"expression references a variable outside 0..{self.num_vars - 1}"
            )

    def objective_vector(self) -> Tuple[np.ndarray, float]:
        c = np.zeros(self.num_vars)
        for j, a in self.objective.coefs.items():
            c[j] = a
        return c, self.objective.const

    def constraint_matrix(self) -> Tuple[sparse.csc_matrix, np.ndarray]:
        """(G, g) of all blocks stacked in insertion order."""
        G = sparse.coo_matrix(
            (self._vals, (self._rows, self._cols)),
            shape=(self.num_rows, self.num_vars)
        ).tocsc()
        return G, np.asarray(self._offsets, dtype=float)

    def block(self, name: str) -> ConeBlock:
        for block in self.blocks:
            if block.name == name:
                return block
        raise KeyError(name)

    def cone_residuals(self, x: np.ndarray) -> Dict[str, float]:
        """Largest violation of each block's cone membership at x."""
        G, g = self.constraint_matrix()
        s = G @ np.asarray(x, dtype=float) + g
        return {block.name: cone_violation(block.kind, s[block.rows]) for block in self.blocks}


def cone_violation(kind: ConeKind, s: np.ndarray) -> float:
    if kind is ConeKind.ZERO:
        return float(np.max(np.abs(s)))
    if kind is ConeKind.NONNEG:
        return float(max(0.0, -np.min(s)))
    if kind is ConeKind.SECOND_ORDER:
        return float(max(0.0, np.linalg.norm(s[1:]) - s[0]))

    worst = 0.0
    for a, b, c in s.reshape(-1, 3):
        if b > 1e-12:
            gap = b * np.exp(min(a / b, 700.0)) - c
        else:
            gap = max(a, 0.0) + max(-c, 0.0) + max(-b, 0.0)
        worst = max(worst, gap)
    return float(worst)


def add_lse_epigraph(prog: ConeProgram, terms: Sequence[Tuple[Affine, float]], bound,
                     name: str = 'lse') -> LseHandles:
    """log sum_k exp(a_k + w_k) <= bound, via sum u_k <= 1 and (a_k + w_k - bound, 1, u_k)."""
    if not terms:
        raise MalformedProgramError("log-sum-exp needs at least one term")
    bound = as_affine(bound)
    for _, weight in terms:
        if not np.isfinite(weight):
            raise MalformedProgramError("log-sum-exp weights must be finite")

    u = prog.add_variables(len(terms), f'{name}.u')
    budget = prog.add_nonneg([1.0 - Affine.total(u)], f'{name}.budget')
    rows = []
    for (expr, weight), uk in zip(terms, u):
        rows.extend([as_affine(expr) + weight - bound, Affine.constant(1.0), Affine.var(uk)])
    cones = prog.add_constraint(ConeKind.EXPONENTIAL, rows, f'{name}.terms')
    return LseHandles(budget, cones, u)


def add_relative_entropy(prog: ConeProgram, p, q, bound, name: str = 'relent') -> ConeBlock:
    """p log(p / q) <= bound, as (-bound, p, q) in the exponential cone."""
    return prog.add_constraint(
        ConeKind.EXPONENTIAL,
        [-as_affine(bound), as_affine(p), as_affine(q)],
        name
    )


def add_second_order_cone(prog: ConeProgram, t, v: Sequence, name: str = 'soc') -> ConeBlock:
    return prog.add_constraint(
        ConeKind.SECOND_ORDER,
        [as_affine(t)] + [as_affine(e) for e in v],
        name
    )
