"""
Clifford tableaux over GF(2), uniform sampling and dense unitary synthesis.

Row i (i < k) is the image of X_i, row k+i the image of Z_i; each row is
[x bits | z bits] with a separate sign bit. A row with x=z=1 on a qubit
denotes Y on that qubit.
"""
import itertools
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from sim.gates import PAULIS
from utils.config import get_settings
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

class CliffordError(Exception):
    """Custom exception for Clifford sampling and synthesis errors"""
    pass

@dataclass(frozen=True)
class CliffordTableau:
    symplectic: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        sym = np.asarray(self.symplectic, dtype=np.uint8) % 2
        phases = np.asarray(self.phases, dtype=np.uint8).reshape(-1) % 2
        if sym.ndim != 2 or sym.shape[0] != sym.shape[1] or sym.shape[0] % 2:
            raise CliffordError(f"Symplectic matrix must be 2k x 2k, got {sym.shape}")
        if phases.size != sym.shape[0]:
            raise CliffordError(f"Expected {sym.shape[0]} sign bits, got {phases.size}")
        sym.flags.writeable = False
        phases.flags.writeable = False
        object.__setattr__(self, 'symplectic', sym)
        object.__setattr__(self, 'phases', phases)

    @property
    def num_qubits(self) -> int:
        return self.symplectic.shape[0] // 2

    def key(self) -> Tuple[bytes, bytes]:
        """Hashable identity of the tableau (global phase is not represented)"""
        return self.symplectic.tobytes(), self.phases.tobytes()

def symplectic_form(k: int) -> np.ndarray:
    zero = np.zeros((k, k), dtype=np.uint8)
    eye = np.eye(k, dtype=np.uint8)
    return np.block([[zero, eye], [eye, zero]])

def is_symplectic(tableau: CliffordTableau) -> bool:
    """S . Omega . S^T == Omega over GF(2)"""
    s = tableau.symplectic.astype(np.int64)
    omega = symplectic_form(tableau.num_qubits).astype(np.int64)
    return bool(np.array_equal((s @ omega @ s.T) % 2, omega))

def identity_tableau(k: int) -> CliffordTableau:
    return CliffordTableau(np.eye(2 * k, dtype=np.uint8), np.zeros(2 * k, dtype=np.uint8))

def _check_k(k: int) -> None:
    caps = get_settings().caps
    if not caps.clifford_min_k <= k <= caps.clifford_max_k:
        raise CliffordError(f"k={k} outside the supported range {caps.clifford_min_k}..{caps.clifford_max_k}")

def _sample_qmallows(n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Hadamard layer and qubit permutation from the quantum Mallows distribution"""
    had = np.zeros(n, dtype=bool)
    perm = np.zeros(n, dtype=int)
    inds = list(range(n))
    for i in range(n):
        m = n - i
        eps = 4.0 ** (-m)
        r = rng.uniform(0, 1)
        index = -int(np.ceil(np.log2(r + (1 - r) * eps)))
        had[i] = index < m
        k = index if index < m else 2 * m - index - 1
        perm[i] = inds[k]
        del inds[k]
    return had, perm

def _fill_tril(mat: np.ndarray, rng: np.random.Generator, symmetric: bool = False) -> None:
    """Random bits below the diagonal, mirrored above it when symmetric"""
    rows, cols = np.tril_indices(len(mat), -1)
    if rows.size == 0:
        return
    vals = rng.integers(2, size=rows.size, dtype=np.int64)
    mat[rows, cols] = vals
    if symmetric:
        mat[cols, rows] = vals

def _inverse_tril(mat: np.ndarray) -> np.ndarray:
    """GF(2) inverse of a unit lower-triangular matrix"""
    # entries stay well inside float precision for k <= 12
    return np.rint(np.linalg.inv(mat.astype(float))).astype(np.int64) % 2

def sample_uniform_clifford(k: int, rng: np.random.Generator) -> CliffordTableau:
    """
    Draw a k-qubit Clifford uniformly at random (global phase ignored).

    Canonical-form sampling: a Hadamard layer and permutation from the quantum
    Mallows distribution sandwiched between two Hadamard-free layers, followed
    by uniformly random sign bits.

    Raises:
        CliffordError: k outside the configured range
    """
    _check_k(k)
    had, perm = _sample_qmallows(k, rng)
    gamma1 = np.diag(rng.integers(2, size=k, dtype=np.int64))
    gamma2 = np.diag(rng.integers(2, size=k, dtype=np.int64))
    delta1 = np.eye(k, dtype=np.int64)
    delta2 = np.eye(k, dtype=np.int64)
    _fill_tril(gamma1, rng, symmetric=True)
    _fill_tril(gamma2, rng, symmetric=True)
    _fill_tril(delta1, rng)
    _fill_tril(delta2, rng)

    zero = np.zeros((k, k), dtype=np.int64)
    prod1 = (gamma1 @ delta1) % 2
    prod2 = (gamma2 @ delta2) % 2
    inv1 = _inverse_tril(delta1).T
    inv2 = _inverse_tril(delta2).T
    table1 = np.block([[delta1, zero], [prod1, inv1]])
    table2 = np.block([[delta2, zero], [prod2, inv2]])

    table = table2[np.concatenate([perm, k + perm])]
    inds = np.flatnonzero(had)
    lhs = np.concatenate([inds, inds + k])
    rhs = np.concatenate([inds + k, inds])
    table[lhs, :] = table[rhs, :]

    symplectic = (table1 @ table) % 2
    phases = rng.integers(2, size=2 * k)
    tableau = CliffordTableau(symplectic, phases)
    if get_settings().debug and not is_symplectic(tableau):
        raise CliffordError("Sampled tableau violates the symplectic condition")
    return tableau

def enumerate_single_qubit_cliffords() -> List[CliffordTableau]:
    """The 24 single-qubit Cliffords modulo global phase"""
    out = []
    for bits in itertools.product((0, 1), repeat=4):
        sym = np.array(bits, dtype=np.uint8).reshape(2, 2)
        if (int(sym[0, 0]) * int(sym[1, 1]) + int(sym[0, 1]) * int(sym[1, 0])) % 2 != 1:
            continue
        for phases in itertools.product((0, 1), repeat=2):
            out.append(CliffordTableau(sym, np.array(phases, dtype=np.uint8)))
    return out

def row_pauli(tableau: CliffordTableau, row: int) -> np.ndarray:
    """Dense Hermitian Pauli for one tableau row, sign included"""
    k = tableau.num_qubits
    x = tableau.symplectic[row, :k]
    z = tableau.symplectic[row, k:]
    out = np.array([[1.0]], dtype=complex)
    for q in range(k):
        label = {(0, 0): 'I', (1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'}[(int(x[q]), int(z[q]))]
        out = np.kron(PAULIS[label], out)
    return -out if tableau.phases[row] else out

def tableau_to_unitary(tableau: CliffordTableau) -> np.ndarray:
    """
    Dense unitary U (up to global phase) with U X_i U^dag and U Z_i U^dag equal
    to the tableau rows.

    U|0> is the joint +1 eigenvector of the Z images; U|x> applies the X images
    selected by x to it.

    Raises:
        CliffordError: more qubits than the unitary cap
    """
    k = tableau.num_qubits
    cap = get_settings().caps.unitary_qubits
    if k > cap:
        raise CliffordError(f"{k}-qubit tableau exceeds the unitary cap of {cap}")
    d = 2 ** k
    destabilizers = [row_pauli(tableau, i) for i in range(k)]
    projector = np.eye(d, dtype=complex)
    for i in range(k):
        projector = projector @ (np.eye(d) + row_pauli(tableau, k + i)) / 2
    column = int(np.argmax(np.linalg.norm(projector, axis=0)))
    psi0 = projector[:, column] / np.linalg.norm(projector[:, column])

    unitary = np.empty((d, d), dtype=complex)
    for x in range(d):
        vec = psi0
        for i in range(k):
            if (x >> i) & 1:
                vec = destabilizers[i] @ vec
        unitary[:, x] = vec

    if get_settings().debug:
        deviation = conjugation_deviation(tableau, unitary)
        if deviation > 1e-9:
            raise CliffordError(f"Synthesised unitary misses the tableau action by {deviation:.3e}")
    return unitary

def conjugation_deviation(tableau: CliffordTableau, unitary: np.ndarray) -> float:
    """Largest deviation between U P U^dag and the tableau image over the X_i, Z_i generators"""
    k = tableau.num_qubits
    worst = 0.0
    for i in range(k):
        for label, row in (('X', i), ('Z', k + i)):
            generator = ['I'] * k
            generator[i] = label
            pauli = np.array([[1.0]], dtype=complex)
            for l in generator:
                pauli = np.kron(PAULIS[l], pauli)
            image = unitary @ pauli @ unitary.conj().T
            worst = max(worst, float(np.max(np.abs(image - row_pauli(tableau, row)))))
    return worst

def apply_tableau_to_pauli(tableau: CliffordTableau, x: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Symplectic image of a Pauli's (x, z) bits; signs are not tracked"""
    k = tableau.num_qubits
    vec = np.concatenate([np.asarray(x), np.asarray(z)]).astype(np.int64)
    image = (vec @ tableau.symplectic.astype(np.int64)) % 2
    return image[:k], image[k:]
