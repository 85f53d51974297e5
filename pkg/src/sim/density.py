"""
Density-matrix simulation with channel insertion, used for exact
channel-averaged references.
"""
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from sim.circuit import ChannelSlot, Circuit, Gate, MeasureZ, PrepareBasis, SimulationError
from sim.gates import apply_matrix, gate_matrix, qubit_axis
from sim.observables import DiagonalObservable
from sim.statevector import check_cap
from utils.config import get_settings

@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray
    num_qubits: int

    def __post_init__(self):
        dim = 2 ** self.num_qubits
        rho = np.asarray(self.entries, dtype=complex).reshape(dim, dim)
        rho.flags.writeable = False
        object.__setattr__(self, 'entries', rho)

    @classmethod
    def zero(cls, num_qubits: int) -> 'DensityMatrix':
        check_cap(num_qubits, get_settings().caps.density_qubits, 'density matrix')
        dim = 2 ** num_qubits
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        return cls(rho, num_qubits)

    def tensor(self) -> np.ndarray:
        return self.entries.reshape((2,) * (2 * self.num_qubits))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def validate(self) -> None:
        """Raise SimulationError unless Hermitian, unit trace and positive within tolerance"""
        tol = get_settings().tolerances
        rho = self.entries
        herm = float(np.max(np.abs(rho - rho.conj().T))) if rho.size else 0.0
        if herm > tol.hermitian:
            raise SimulationError(f"Density matrix not Hermitian (deviation {herm:.3e})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > tol.trace:
            raise SimulationError(f"Density matrix trace {trace:.12f} differs from 1")
        lowest = float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)))
        if lowest < tol.eigenvalue_floor:
            raise SimulationError(f"Density matrix has eigenvalue {lowest:.3e}")

def apply_superoperator(
    rho: np.ndarray, superop: np.ndarray, wires: Sequence[int], num_qubits: int
) -> np.ndarray:
    """
    Apply a column-stacked superoperator to the listed wires of a (2,)*2n tensor.

    The local operator index uses wires[0] as its least-significant bit.
    """
    k = len(wires)
    d = 2 ** k
    row_axes = [qubit_axis(w, num_qubits) for w in reversed(wires)]
    col_axes = [qubit_axis(w, num_qubits, offset=num_qubits) for w in reversed(wires)]
    moved = np.moveaxis(rho, row_axes + col_axes, list(range(2 * k)))
    rest_shape = moved.shape[2 * k:]
    block = moved.reshape(d, d, -1)
    vectors = block.transpose(1, 0, 2).reshape(d * d, -1)
    out = (superop @ vectors).reshape(d, d, -1).transpose(1, 0, 2)
    out = out.reshape((2,) * (2 * k) + rest_shape)
    return np.moveaxis(out, list(range(2 * k)), row_axes + col_axes)

def apply_unitary_density(rho: np.ndarray, matrix: np.ndarray, wires: Sequence[int], num_qubits: int) -> np.ndarray:
    rho = apply_matrix(rho, matrix, wires, num_qubits)
    return apply_matrix(rho, matrix.conj(), wires, num_qubits, offset=num_qubits)

def _dephasing_superop() -> np.ndarray:
    # keeps |0><0| and |1><1|, kills coherences
    return np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)

def _reset_superop(bit: int) -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    target = 0 if bit == 0 else 3
    s[target, 0] = 1.0
    s[target, 3] = 1.0
    return s

def run_density(
    circuit: Circuit,
    channel_bindings: Optional[Mapping[str, object]] = None,
    validate: bool = True,
) -> DensityMatrix:
    """
    Evolve rho_0 = |0..0><0..0| through the circuit.

    Args:
        circuit: gates, channel slots, fixed-bit preparations and unrecorded measurements
        channel_bindings: slot id -> Superoperator (anything with .matrix and .dim)
        validate: check the DensityMatrix invariants on the output

    Returns:
        The output density matrix (terminal measurements are not applied)

    Raises:
        CapExceededError: more qubits than the density cap
        SimulationError: unbound slot, dimension mismatch, trace drift, record-driven preparation
    """
    bindings = channel_bindings or {}
    n = circuit.num_qubits
    drift_tol = get_settings().tolerances.trace_drift
    rho = DensityMatrix.zero(n).tensor().copy()

    for index, op in enumerate(circuit.body()):
        if isinstance(op, Gate):
            rho = apply_unitary_density(rho, gate_matrix(op), op.wires, n)
        elif isinstance(op, ChannelSlot):
            if op.slot not in bindings:
                raise SimulationError(f"Channel slot {op.slot} has no binding")
            superop = bindings[op.slot]
            if superop.dim != 2 ** len(op.wires):
                raise SimulationError(
                    f"Slot {op.slot} has {len(op.wires)} wires but its binding has dimension {superop.dim}"
                )
            before = _trace(rho, n)
            rho = apply_superoperator(rho, superop.matrix, op.wires, n)
            after = _trace(rho, n)
            if abs(after - before) > drift_tol:
                raise SimulationError(
                    f"Binding for slot {op.slot} is not trace preserving (drift {abs(after - before):.3e})"
                )
        elif isinstance(op, MeasureZ):
            for w in op.wires:
                rho = apply_superoperator(rho, _dephasing_superop(), (w,), n)
        elif isinstance(op, PrepareBasis):
            if op.bits is None:
                raise SimulationError(
                    f"Op {index}: record-driven PrepareBasis has no density-matrix meaning"
                )
            for w, b in zip(op.wires, op.bits):
                rho = apply_superoperator(rho, _reset_superop(b), (w,), n)

    dim = 2 ** n
    result = DensityMatrix(np.ascontiguousarray(rho).reshape(dim, dim), n)
    if validate:
        result.validate()
    return result

def _trace(rho: np.ndarray, num_qubits: int) -> complex:
    dim = 2 ** num_qubits
    return complex(np.trace(rho.reshape(dim, dim)))

def density_expectation(rho: DensityMatrix, obs: DiagonalObservable) -> float:
    return float(np.dot(rho.diagonal(), obs.table(rho.num_qubits)))

def reduced_density(rho: DensityMatrix, wires: Sequence[int]) -> np.ndarray:
    """Partial trace onto the listed wires (wires[0] least significant)"""
    n = rho.num_qubits
    k = len(wires)
    row_axes = [qubit_axis(w, n) for w in reversed(wires)]
    col_axes = [qubit_axis(w, n, offset=n) for w in reversed(wires)]
    tensor = np.moveaxis(rho.tensor(), row_axes + col_axes, list(range(2 * k)))
    rest = 2 * (n - k)
    tensor = tensor.reshape((2 ** k, 2 ** k) + (2 ** (n - k),) * 2 if rest else (2 ** k, 2 ** k, 1, 1))
    return np.trace(tensor, axis1=2, axis2=3)
