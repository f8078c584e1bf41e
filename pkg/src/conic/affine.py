from typing import Dict, Iterable, Mapping, Sequence, Union

import numpy as np

Scalar = Union[int, float, np.floating]


class Affine:
    """Sparse scalar affine expression sum_j a_j x_j + const over program variables."""

    __slots__ = ('coefs', 'const')
    # numpy scalars defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, coefs: Mapping[int, float] = None, const: float = 0.0):
        self.coefs: Dict[int, float] = {}
        if coefs:
            for index, value in coefs.items():
                if value != 0.0:
                    self.coefs[int(index)] = float(value)
        self.const = float(const)

    @classmethod
    def var(cls, index: int, scale: float = 1.0) -> "Affine":
        return cls({index: scale})

    @classmethod
    def constant(cls, value: float) -> "Affine":
        return cls(None, value)

    @classmethod
    def dot(cls, weights: Iterable[float], indices: Iterable[int], const: float = 0.0) -> "Affine":
        expr = cls(None, const)
        for w, j in zip(weights, indices):
            if w != 0.0:
                expr.coefs[int(j)] = expr.coefs.get(int(j), 0.0) + float(w)
        return expr

    @classmethod
    def total(cls, indices: Iterable[int]) -> "Affine":
        return cls({int(j): 1.0 for j in indices})

    def copy(self) -> "Affine":
        expr = Affine(None, self.const)
        expr.coefs = dict(self.coefs)
        return expr

    @property
    def max_index(self) -> int:
        return max(self.coefs) if self.coefs else -1

    def evaluate(self, x: np.ndarray) -> float:
        return self.const + sum(a * x[j] for j, a in self.coefs.items())

    def _combine(self, other, sign: float) -> "Affine":
        expr = self.copy()
        if isinstance(other, Affine):
            for j, a in other.coefs.items():
                expr.coefs[j] = expr.coefs.get(j, 0.0) + sign * a
            expr.const += sign * other.const
        else:
            expr.const += sign * float(other)
        return expr

    def __add__(self, other) -> "Affine":
        return self._combine(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other) -> "Affine":
        return self._combine(other, -1.0)

    def __rsub__(self, other) -> "Affine":
        return (-self)._combine(other, 1.0)

    def __mul__(self, factor: Scalar) -> "Affine":
        factor = float(factor)
        expr = Affine(None, self.const * factor)
        expr.coefs = {j: a * factor for j, a in self.coefs.items()}
        return expr

    __rmul__ = __mul__

    def __neg__(self) -> "Affine":
        return self * -1.0

    def __repr__(self) -> str:
        terms = ' + '.join(f'{a:g}*x{j}' for j, a in sorted(self.coefs.items()))
        return f"Affine({terms or '0'} + {self.const:g})"


def as_affine(value) -> Affine:
    return value if isinstance(value, Affine) else Affine.constant(value)


def affine_rows(G, indices: Sequence[int], g=None) -> list:
    """Rows of G @ x[indices] + g as Affine expressions."""
    G = np.atleast_2d(np.asarray(G, dtype=float))
    g = np.zeros(G.shape[0]) if g is None else np.asarray(g, dtype=float)
    return [Affine.dot(G[r], indices, g[r]) for r in range(G.shape[0])]
