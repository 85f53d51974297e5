"""
Gate matrices and the dense tensor kernel shared by the statevector and
density-matrix simulators.

Conventions: RX(t) = exp(-i t/2 X), RY(t) = exp(-i t/2 Y), RZ(t) = exp(-i t/2 Z),
RZZ(t) = exp(-i t/2 Z(x)Z). For multi-qubit matrices the first listed wire is the
least-significant bit of the matrix index; CNOT controls on wires[0].
"""
from typing import Sequence

import numpy as np

from sim.circuit import Gate, SimulationError

SQRT2_INV = 1.0 / np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = SQRT2_INV * np.array([[1, 1], [1, -1]], dtype=complex)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
SDG = S.conj().T

PAULIS = {'I': I2, 'X': X, 'Y': Y, 'Z': Z}

# index = bit(wires[0]) + 2*bit(wires[1])
CNOT = np.array([
    [1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=complex)

_FIXED = {'H': H, 'X': X, 'Y': Y, 'Z': Z, 'S': S, 'SDG': SDG, 'CNOT': CNOT, 'CZ': CZ, 'SWAP': SWAP}

def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)

def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)

def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])

def rzz(theta: float) -> np.ndarray:
    # parity 0 (|00>,|11>) picks up exp(-i t/2), parity 1 exp(+i t/2)
    minus, plus = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return np.diag([minus, plus, plus, minus])

def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.kind in _FIXED:
        return _FIXED[gate.kind]
    if gate.kind == 'RX':
        return rx(gate.angle)
    if gate.kind == 'RY':
        return ry(gate.angle)
    if gate.kind == 'RZ':
        return rz(gate.angle)
    if gate.kind == 'RZZ':
        return rzz(gate.angle)
    raise SimulationError(f"No matrix for gate {gate.kind}")

def qubit_axis(qubit: int, num_qubits: int, offset: int = 0) -> int:
    """Tensor axis holding `qubit` when a 2^n index is reshaped to (2,)*n"""
    return offset + num_qubits - 1 - qubit

def apply_matrix(
    tensor: np.ndarray,
    matrix: np.ndarray,
    wires: Sequence[int],
    num_qubits: int,
    offset: int = 0,
) -> np.ndarray:
    """
    Contract a 2^k x 2^k matrix into the qubit axes of `tensor`.

    Args:
        tensor: array whose axes offset..offset+n-1 are the qubit axes (qubit n-1 first)
        matrix: operator with wires[0] as its least-significant index bit
        wires: target qubits
        num_qubits: n
        offset: position of the first qubit axis

    Returns:
        New tensor with the operator applied
    """
    k = len(wires)
    op = matrix.reshape((2,) * (2 * k))
    # op axes: outputs for wires[k-1]..wires[0], then inputs in the same order
    in_axes = [qubit_axis(w, num_qubits, offset) for w in reversed(wires)]
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), in_axes))
    return np.moveaxis(out, list(range(k)), in_axes)

def embed_operator(matrix: np.ndarray, wires: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of a k-qubit operator; used by small checks only"""
    dim = 2 ** num_qubits
    full = np.eye(dim, dtype=complex).reshape((2,) * num_qubits + (dim,))
    full = apply_matrix(full, matrix, wires, num_qubits)
    return full.reshape(dim, dim)

def pauli_string_matrix(labels: str) -> np.ndarray:
    """Matrix of a Pauli string; labels[i] acts on local qubit i (qubit 0 least significant)"""
    out = np.array([[1.0]], dtype=complex)
    for label in labels:
        out = np.kron(PAULIS[label], out)
    return out
