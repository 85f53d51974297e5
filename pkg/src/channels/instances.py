"""
Concrete measure-and-prepare channels for a single shot.

A decomposition term plus its per-shot randomness (the Clifford basis, the
uniform re-preparation or the Pauli eigenstate) gives an instance that can be
bound to a ChannelSlot and executed on a statevector.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from channels.decompositions import MeasureKind, QuasiDecomposition, sample_term
from cliffords import sample_uniform_clifford, tableau_to_unitary
from sim.gates import H, S, SDG
from sim.statevector import Statevector, apply_unitary, measure, reset

def measure_pauli(state: Statevector, wires, pauli: str, rng) -> Tuple[Statevector, int]:
    """Measure one wire in the eigenbasis of a Pauli; 'I' discards it and reports +1"""
    if pauli == 'X':
        state = apply_unitary(state, H, wires)
    elif pauli == 'Y':
        state = apply_unitary(state, H @ SDG, wires)
    bits, state = measure(state, wires, rng)
    if pauli == 'I':
        return state, 1
    return state, 1 - 2 * bits[0]

def prepare_pauli(state: Statevector, wires, pauli: str, eigenvalue: int, rng) -> Statevector:
    """Prepare the eigenvalue-e eigenstate of a Pauli ('I' prepares |0> or |1>)"""
    state = reset(state, wires, (0 if eigenvalue > 0 else 1,), rng)
    if pauli == 'X':
        state = apply_unitary(state, H, wires)
    elif pauli == 'Y':
        state = apply_unitary(state, S @ H, wires)
    return state

@dataclass
class RandomizedInstance:
    """
    z=0: measure in the basis V|y> and prepare V|y>; z=1: measure, forget and
    prepare a uniformly random basis state.
    """
    z: int
    unitary: Optional[np.ndarray]
    weight: float

    def execute(self, state: Statevector, wires: Tuple[int, ...], rng: np.random.Generator) -> Tuple[Statevector, Dict]:
        if self.unitary is not None:
            state = apply_unitary(state, self.unitary.conj().T, wires)
        bits, state = measure(state, wires, rng)
        if self.z:
            bits = tuple(int(b) for b in rng.integers(2, size=len(wires)))
        state = reset(state, wires, bits, rng)
        if self.unitary is not None:
            state = apply_unitary(state, self.unitary, wires)
        return state, {'z': self.z, 'bits': bits, 'weight': self.weight}

@dataclass
class PauliInstance:
    """Wire-by-wire Pauli measurement followed by eigenstate preparation"""
    paulis: str
    eigenvalues: Tuple[int, ...]
    weight: float

    def execute(self, state: Statevector, wires: Tuple[int, ...], rng: np.random.Generator) -> Tuple[Statevector, Dict]:
        outcome = 1
        for w, pauli in zip(wires, self.paulis):
            state, eigenvalue = measure_pauli(state, (w,), pauli, rng)
            outcome *= eigenvalue
        for w, pauli, e in zip(wires, self.paulis, self.eigenvalues):
            state = prepare_pauli(state, (w,), pauli, e, rng)
        # the measured eigenvalue folds into the shot sign
        return state, {'paulis': self.paulis, 'outcome': outcome, 'weight': self.weight * outcome}

def draw_instance(decomp: QuasiDecomposition, rng: np.random.Generator):
    """
    Sample a term and its randomness. `weight` is one_norm * sign; the record
    returned by execute() carries the shot weight, which for a Pauli instance
    includes the measured eigenvalue. Instances are not modified by execution.
    """
    term, one_norm, sign = sample_term(decomp, rng)
    if decomp.method == 'randomized':
        unitary = None
        if term.measure == MeasureKind.CLIFFORD:
            unitary = tableau_to_unitary(sample_uniform_clifford(decomp.num_wires, rng))
        return RandomizedInstance(int(term.measure == MeasureKind.TRACE_ONLY), unitary, one_norm * sign)
    return PauliInstance(term.paulis, term.eigenvalues, one_norm * sign)
