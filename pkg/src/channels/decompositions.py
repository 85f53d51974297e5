"""
Quasiprobability decompositions of the identity channel into
measure-and-prepare channels.

Two instances are provided:
  randomized  id = (d+1) Psi0 - d Psi1 on a joint d = 2^k register
  pauli       id = sum over P in {I,X,Y,Z}, e in {+1,-1} of (+-1/2) Tr(P .) rho_e^P, per wire
"""
import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Iterable, List, Optional, Tuple

import numpy as np

from channels.superop import (
    ChannelError, Superoperator, from_map, identity_superop, tensor_superop, vec,
)
from cliffords import enumerate_single_qubit_cliffords, sample_uniform_clifford, tableau_to_unitary
from sim.gates import PAULIS
from utils.config import get_settings
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

class MeasureKind(Enum):
    PAULI = 'pauli'
    CLIFFORD = 'clifford'
    TRACE_ONLY = 'trace_only'

class PrepareKind(Enum):
    EIGENSTATE = 'eigenstate'
    FIXED_BASIS = 'fixed_basis'
    UNIFORM_RANDOM = 'uniform_random'
    CLIFFORD_OUTCOME = 'clifford_outcome'

@dataclass(frozen=True)
class MeasurePrepTerm:
    """
    One signed measure-and-prepare channel.

    `paulis` and `eigenvalues` describe Pauli-basis terms wire by wire
    (index 0 is the least-significant wire); they are empty for the
    randomized terms.
    """
    coefficient: float
    measure: MeasureKind
    prepare: PrepareKind
    superop: Superoperator
    paulis: str = ''
    eigenvalues: Tuple[int, ...] = ()

    def __post_init__(self):
        if abs(self.coefficient) <= 0:
            raise ChannelError("Term coefficient must be non-zero")
        if self.paulis and 2 ** len(self.paulis) != self.superop.dim:
            raise ChannelError(f"Pauli labels {self.paulis} do not match dimension {self.superop.dim}")

    @property
    def dim(self) -> int:
        return self.superop.dim

    @property
    def sign(self) -> int:
        return 1 if self.coefficient > 0 else -1

    def outcome_wires(self) -> Tuple[int, ...]:
        """Local wires whose measured eigenvalue enters the estimator sign"""
        return tuple(i for i, p in enumerate(self.paulis) if p != 'I')

@dataclass(frozen=True)
class QuasiDecomposition:
    terms: Tuple[MeasurePrepTerm, ...]
    dim: int
    method: str
    probabilities: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ChannelError("Decomposition needs at least one term")
        for term in terms:
            if term.dim != self.dim:
                raise ChannelError(f"Term of dimension {term.dim} in a dimension {self.dim} decomposition")
        object.__setattr__(self, 'terms', terms)
        weights = np.array([abs(t.coefficient) for t in terms])
        probs = weights / weights.sum()
        probs.flags.writeable = False
        object.__setattr__(self, 'probabilities', probs)

    @property
    def one_norm(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    @property
    def num_wires(self) -> int:
        return int(round(np.log2(self.dim)))

def _check_dim(d: int) -> None:
    max_dim = get_settings().caps.superop_max_dim
    if d < 2 or d & (d - 1) or d > max_dim:
        raise ChannelError(f"Dimension {d} must be a power of two between 2 and {max_dim}")

def psi0_superop(d: int) -> Superoperator:
    """X -> (Tr(X) 1 + X)/(d+1)"""
    _check_dim(d)
    v = vec(np.eye(d))
    return Superoperator((np.outer(v, v) + np.eye(d * d)) / (d + 1), d)

def psi1_superop(d: int) -> Superoperator:
    """X -> Tr(X) 1/d"""
    _check_dim(d)
    v = vec(np.eye(d))
    return Superoperator(np.outer(v, v) / d, d)

def basis_measure_prepare(unitary: np.ndarray) -> np.ndarray:
    """Superoperator matrix of X -> sum_y <y|U^dag X U|y> U|y><y|U^dag"""
    d = unitary.shape[0]
    out = np.zeros((d * d, d * d), dtype=complex)
    for y in range(d):
        projector = np.outer(unitary[:, y], unitary[:, y].conj())
        v = vec(projector)
        out += np.outer(v, v.conj())
    return out

def clifford_averaged_psi0(unitaries: Iterable[np.ndarray]) -> Superoperator:
    """Average of basis_measure_prepare over the given unitaries"""
    total = None
    count = 0
    for u in unitaries:
        m = basis_measure_prepare(u)
        total = m if total is None else total + m
        count += 1
    if count == 0:
        raise ChannelError("No unitaries to average")
    return Superoperator(total / count, int(round(np.sqrt(total.shape[0]))))

def exhaustive_psi0() -> Superoperator:
    """Single-qubit Psi0 averaged over all 24 Cliffords"""
    return clifford_averaged_psi0(tableau_to_unitary(t) for t in enumerate_single_qubit_cliffords())

def sampled_psi0(k: int, samples: int, rng: np.random.Generator) -> Superoperator:
    return clifford_averaged_psi0(tableau_to_unitary(sample_uniform_clifford(k, rng)) for _ in range(samples))

def randomized_decomposition(k: int) -> QuasiDecomposition:
    """
    The two-term randomized cut on k wires.

    Args:
        k: number of wires cut jointly (d = 2^k)

    Returns:
        QuasiDecomposition with terms +(d+1) Psi0 and -d Psi1, one-norm 2d+1
    """
    d = 2 ** k
    _check_dim(d)
    terms = (
        MeasurePrepTerm(float(d + 1), MeasureKind.CLIFFORD, PrepareKind.CLIFFORD_OUTCOME, psi0_superop(d)),
        MeasurePrepTerm(float(-d), MeasureKind.TRACE_ONLY, PrepareKind.UNIFORM_RANDOM, psi1_superop(d)),
    )
    return QuasiDecomposition(terms, d, 'randomized')

def _pauli_term_map(pauli: str, eigenvalue: int):
    if pauli == 'I':
        # e picks |0> or |1>
        prepared = np.diag([1.0, 0.0] if eigenvalue > 0 else [0.0, 1.0]).astype(complex)
        return lambda x: np.trace(x) * prepared
    matrix = PAULIS[pauli]
    prepared = (np.eye(2) + eigenvalue * matrix) / 2
    return lambda x: np.trace(matrix @ x) * prepared

def pauli_decomposition(corrupt: bool = False) -> QuasiDecomposition:
    """
    Single-wire Pauli-basis cut: 8 terms of magnitude 1/2, one-norm 4.

    `corrupt` flips the sign of the Z terms; it exists so the selftest can
    show that a broken table is caught.
    """
    terms = []
    for pauli in ('I', 'X', 'Y', 'Z'):
        for e in (1, -1):
            coefficient = 0.5 if pauli == 'I' else 0.5 * e
            if corrupt and pauli == 'Z':
                coefficient = -coefficient
            if pauli == 'I':
                measure, prepare = MeasureKind.TRACE_ONLY, PrepareKind.FIXED_BASIS
            else:
                measure, prepare = MeasureKind.PAULI, PrepareKind.EIGENSTATE
            terms.append(MeasurePrepTerm(
                coefficient, measure, prepare, from_map(_pauli_term_map(pauli, e), 2),
                paulis=pauli, eigenvalues=(e,),
            ))
    return QuasiDecomposition(tuple(terms), 2, 'pauli')

def tensor_decomposition(decomp: QuasiDecomposition, k: int) -> QuasiDecomposition:
    """k independent copies of a single-wire Pauli decomposition, term by term"""
    if decomp.method != 'pauli' or decomp.dim != 2:
        raise ChannelError("Only single-wire Pauli decompositions are tensored wire by wire")
    _check_dim(2 ** k)
    terms = []
    for combo in itertools.product(decomp.terms, repeat=k):
        coefficient = float(np.prod([t.coefficient for t in combo]))
        superop = reduce(tensor_superop, (t.superop for t in combo))
        measure = MeasureKind.PAULI if any(t.measure == MeasureKind.PAULI for t in combo) else MeasureKind.TRACE_ONLY
        terms.append(MeasurePrepTerm(
            coefficient, measure, PrepareKind.EIGENSTATE, superop,
            paulis=''.join(t.paulis for t in combo),
            eigenvalues=tuple(e for t in combo for e in t.eigenvalues),
        ))
    return QuasiDecomposition(tuple(terms), 2 ** k, 'pauli')

def term_superop(term: MeasurePrepTerm) -> Superoperator:
    """Exact superoperator of a term; single-qubit Clifford terms use the full 24-element average"""
    if term.measure == MeasureKind.CLIFFORD and term.dim == 2:
        return exhaustive_psi0()
    return term.superop

def verify_identity(decomp: QuasiDecomposition) -> float:
    """
    Frobenius residual of sum_i a_i S_i minus the identity superoperator.

    Raises:
        ChannelError: dimension above the superoperator cap
    """
    _check_dim(decomp.dim)
    total = np.zeros((decomp.dim ** 2, decomp.dim ** 2), dtype=complex)
    for term in decomp.terms:
        total += term.coefficient * term_superop(term).matrix
    residual = float(np.linalg.norm(total - identity_superop(decomp.dim).matrix))
    logger.debug(f"{decomp.method} decomposition d={decomp.dim}: identity residual {residual:.3e}")
    return residual

def sample_term(decomp: QuasiDecomposition, rng: np.random.Generator) -> Tuple[MeasurePrepTerm, float, int]:
    """Draw a term with probability |a_i|/one_norm; returns (term, one_norm, sign)"""
    index = int(rng.choice(len(decomp.terms), p=decomp.probabilities))
    term = decomp.terms[index]
    return term, decomp.one_norm, term.sign

def enumerate_estimator(
    decomp: QuasiDecomposition, rho: np.ndarray, observable: np.ndarray
) -> float:
    """
    Exact expectation of the sampled single-shot estimator on a Pauli decomposition:
    sum over terms and measurement outcomes of Pr * one_norm * sign * o * Tr(O rho_prep).
    """
    if decomp.method != 'pauli':
        raise ChannelError("Outcome enumeration is only defined for Pauli-basis terms")
    total = 0.0
    for term, prob_term in zip(decomp.terms, decomp.probabilities):
        prepared = _prepared_state(term)
        prep_value = float(np.real(np.trace(observable @ prepared)))
        # the joint eigenvalue of the measured Pauli string, averaged over outcomes
        measured = _pauli_product(term.paulis)
        outcome_mean = float(np.real(np.trace(measured @ rho)))
        total += prob_term * decomp.one_norm * term.sign * outcome_mean * prep_value
    return total

def _pauli_product(labels: str) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for label in labels:
        out = np.kron(PAULIS[label], out)
    return out

def _prepared_state(term: MeasurePrepTerm) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for label, e in zip(term.paulis, term.eigenvalues):
        if label == 'I':
            local = np.diag([1.0, 0.0] if e > 0 else [0.0, 1.0]).astype(complex)
        else:
            local = (np.eye(2) + e * PAULIS[label]) / 2
        out = np.kron(local, out)
    return out
