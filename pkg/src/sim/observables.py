from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

@dataclass(frozen=True, eq=False)
class DiagonalObservable:
    """
    Diagonal observable O_f = sum_x f(x)|x><x| with |f| <= 1.

    `evaluate` maps a basis index to f(x); `vectorized`, when given, maps an
    integer array of indices to the array of values and is used for exact sums.
    """
    evaluate: Callable[[int], float]
    rescale_note: str = ''
    vectorized: Optional[Callable[[np.ndarray], np.ndarray]] = None
    _tables: Dict[int, np.ndarray] = field(default_factory=dict, compare=False, repr=False)

    def __call__(self, x: int) -> float:
        return float(self.evaluate(int(x)))

    def table(self, num_qubits: int) -> np.ndarray:
        """f evaluated on every basis index of an n-qubit register"""
        if num_qubits not in self._tables:
            indices = np.arange(2 ** num_qubits)
            if self.vectorized is not None:
                values = np.asarray(self.vectorized(indices), dtype=float)
            else:
                values = np.array([self.evaluate(int(x)) for x in indices], dtype=float)
            values.flags.writeable = False
            self._tables[num_qubits] = values
        return self._tables[num_qubits]

    def check_bounded(self, num_qubits: int, cap: int = 16) -> bool:
        """Spot-check |f(x)| <= 1 on every x when n is small enough"""
        if num_qubits > cap:
            return True
        return bool(np.all(np.abs(self.table(num_qubits)) <= 1.0 + 1e-12))

def _bits(indices: np.ndarray, qubit: int) -> np.ndarray:
    return (indices >> qubit) & 1

def parity_observable(wires: Sequence[int]) -> DiagonalObservable:
    """(-1)^(sum of bits on wires), i.e. the product of Z on those wires"""
    wires = tuple(wires)

    def vectorized(indices):
        parity = np.zeros_like(indices)
        for w in wires:
            parity ^= _bits(indices, w)
        return 1.0 - 2.0 * parity

    return DiagonalObservable(
        evaluate=lambda x: float(vectorized(np.array([x]))[0]),
        rescale_note=f"Z-parity on wires {list(wires)}",
        vectorized=vectorized,
    )

def zz_observable(i: int, j: int) -> DiagonalObservable:
    return parity_observable((i, j))

def edge_sum_observable(edges: Sequence[Tuple[int, int]], scale: Optional[float] = None) -> DiagonalObservable:
    """(1/scale) * sum over edges of Z_i Z_j; scale defaults to the edge count"""
    edges = tuple((int(u), int(v)) for u, v in edges)
    scale = float(len(edges) if scale is None else scale)

    def vectorized(indices):
        total = np.zeros(indices.shape, dtype=float)
        for u, v in edges:
            total += 1.0 - 2.0 * (_bits(indices, u) ^ _bits(indices, v))
        return total / scale

    return DiagonalObservable(
        evaluate=lambda x: float(vectorized(np.array([x]))[0]),
        rescale_note=f"sum of Z_iZ_j over {len(edges)} edges divided by {scale:g}",
        vectorized=vectorized,
    )
