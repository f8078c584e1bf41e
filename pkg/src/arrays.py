import numpy as np

from src.errors import DimensionMismatchError, DomainError


def readonly(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    array.setflags(write=False)
    return array


def as_vector(values, name: str, length: int = None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim == 0:
        array = array.reshape(1)
    if array.ndim != 1:
        raise DimensionMismatchError(f"{name} must be one-dimensional, got shape {array.shape}")
    if length is not None and array.shape[0] != length:
        raise DimensionMismatchError(f"{name} must have length {length}, got {array.shape[0]}")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} contains non-finite entries")
    return readonly(array)


def as_matrix(values, name: str, shape: tuple = None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 2:
        raise DimensionMismatchError(f"{name} must be two-dimensional, got shape {array.shape}")
    if shape is not None:
        for axis, expected in enumerate(shape):
            if expected is not None and array.shape[axis] != expected:
                raise DimensionMismatchError(
                    f"{name} must have shape {shape}, got {array.shape}"
                )
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} contains non-finite entries")
    return readonly(array)
