"""
Superoperators in the column-stacking convention: vec(X)[a + d*b] = X[a, b].
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from utils.config import get_settings

class ChannelError(Exception):
    """Custom exception for channel construction and verification errors"""
    pass

def vec(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix).reshape(-1, order='F')

def unvec(vector: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vector).reshape((dim, dim), order='F')

@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray
    dim: int

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (self.dim ** 2, self.dim ** 2):
            raise ChannelError(f"Superoperator matrix {mat.shape} does not match dimension {self.dim}")
        mat.flags.writeable = False
        object.__setattr__(self, 'matrix', mat)

    def apply(self, operator: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(operator), self.dim)

    def __add__(self, other: 'Superoperator') -> 'Superoperator':
        if other.dim != self.dim:
            raise ChannelError(f"Cannot add superoperators of dimension {self.dim} and {other.dim}")
        return Superoperator(self.matrix + other.matrix, self.dim)

    def scaled(self, factor: float) -> 'Superoperator':
        return Superoperator(factor * self.matrix, self.dim)

def identity_superop(dim: int) -> Superoperator:
    return Superoperator(np.eye(dim * dim), dim)

def from_map(channel: Callable[[np.ndarray], np.ndarray], dim: int) -> Superoperator:
    """Superoperator of a linear map, built column by column from the matrix units"""
    matrix = np.zeros((dim * dim, dim * dim), dtype=complex)
    for b in range(dim):
        for a in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[a, b] = 1.0
            matrix[:, a + dim * b] = vec(channel(unit))
    return Superoperator(matrix, dim)

def tensor_superop(low: Superoperator, high: Superoperator) -> Superoperator:
    """
    Superoperator of low (x) high, where `low` acts on the least-significant
    factor of the joint matrix index.
    """
    dl, dh = low.dim, high.dim
    # (b', a', b, a) ordering of the column-stacked index pairs
    s_low = low.matrix.reshape(dl, dl, dl, dl)
    s_high = high.matrix.reshape(dh, dh, dh, dh)
    joint = np.einsum('pqrs,PQRS->PpQqRrSs', s_low, s_high)
    d = dl * dh
    return Superoperator(joint.reshape(d * d, d * d), d)

def is_trace_preserving(superop: Superoperator, tol: float = None) -> bool:
    """<<1| S == <<1| within tolerance"""
    tol = get_settings().tolerances.norm if tol is None else tol
    row = vec(np.eye(superop.dim))
    return bool(np.max(np.abs(row @ superop.matrix - row)) <= tol)

def choi_matrix(superop: Superoperator) -> np.ndarray:
    """Sum over a, b of |a><b| (x) S(|a><b|), with the input factor most significant"""
    d = superop.dim
    choi = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[a, b] = 1.0
            choi += np.kron(unit, superop.apply(unit))
    return choi

def is_completely_positive(superop: Superoperator, floor: float = None) -> bool:
    floor = get_settings().tolerances.eigenvalue_floor if floor is None else floor
    choi = choi_matrix(superop)
    return bool(np.min(np.linalg.eigvalsh((choi + choi.conj().T) / 2)) >= floor)
