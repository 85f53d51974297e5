#!/usr/bin/env python3
import sys
from pathlib import Path

import numpy as np
import pytest

# Define directory paths
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent

# Add src directory to Python path
sys.path.append(str(ROOT_DIR / 'src'))

from channels import (
    ChannelError, MeasureKind, PauliInstance, RandomizedInstance, Superoperator, choi_matrix, draw_instance,
    enumerate_estimator, exhaustive_psi0, identity_superop, is_completely_positive, is_trace_preserving,
    pauli_decomposition, psi0_superop, psi1_superop, randomized_decomposition, sample_term, tensor_decomposition,
    sampled_psi0, tensor_superop, vec, verify_identity,
)
from sim import Gate, Statevector
from sim.statevector import apply_gate

def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)

def test_vec_is_column_stacking():
    assert np.array_equal(vec(np.array([[1, 2], [3, 4]])), [1, 3, 2, 4])

def test_psi_channels_on_zero_state():
    zero = np.diag([1.0, 0.0])
    assert np.allclose(psi0_superop(2).apply(zero), np.diag([2 / 3, 1 / 3]))
    assert np.allclose(psi1_superop(2).apply(zero), np.eye(2) / 2)

@pytest.mark.parametrize('d', [2, 4, 8])
def test_psi_channels_are_cptp(d):
    for superop in (psi0_superop(d), psi1_superop(d)):
        assert is_trace_preserving(superop)
        assert is_completely_positive(superop)

@pytest.mark.parametrize('k, one_norm', [(1, 5), (2, 9), (3, 17)])
def test_randomized_identity(k, one_norm):
    decomp = randomized_decomposition(k)
    assert decomp.one_norm == one_norm
    assert verify_identity(decomp) <= 1e-12

def test_randomized_term_probabilities():
    decomp = randomized_decomposition(1)
    assert decomp.probabilities[1] == pytest.approx(2 / 5)
    rng = np.random.default_rng(17)
    draws = 50000
    hits = sum(sample_term(decomp, rng)[0].measure == MeasureKind.TRACE_ONLY for _ in range(draws))
    sigma = np.sqrt(0.4 * 0.6 / draws)
    assert abs(hits / draws - 0.4) <= 5 * sigma

def test_exhaustive_clifford_average_is_psi0():
    assert np.allclose(exhaustive_psi0().matrix, psi0_superop(2).matrix, atol=1e-12)

def test_pauli_identity_and_negative_control():
    decomp = pauli_decomposition()
    assert len(decomp.terms) == 8
    assert decomp.one_norm == 4
    assert verify_identity(decomp) <= 1e-12
    assert verify_identity(pauli_decomposition(corrupt=True)) > 1e-3

def test_tensored_pauli_identity():
    decomp = tensor_decomposition(pauli_decomposition(), 2)
    assert len(decomp.terms) == 64
    assert decomp.one_norm == pytest.approx(16)
    assert verify_identity(decomp) <= 1e-12

def test_tensor_superop():
    assert np.allclose(tensor_superop(identity_superop(2), identity_superop(2)).matrix, np.eye(16))
    assert np.allclose(tensor_superop(psi1_superop(2), psi1_superop(2)).matrix, psi1_superop(4).matrix)

def test_choi_of_identity():
    eigenvalues = np.linalg.eigvalsh(choi_matrix(identity_superop(2)))
    assert np.allclose(sorted(eigenvalues), [0, 0, 0, 2])

def test_pauli_estimator_enumeration_is_exact():
    rng = np.random.default_rng(4)
    rho = random_state(2, rng)
    observable = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, -0.7]])
    expected = float(np.real(np.trace(observable @ rho)))
    assert enumerate_estimator(pauli_decomposition(), rho, observable) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ChannelError):
        enumerate_estimator(randomized_decomposition(1), rho, observable)

def test_pauli_estimator_on_plus_state():
    plus = np.full((2, 2), 0.5)
    x = np.array([[0, 1], [1, 0]])
    assert enumerate_estimator(pauli_decomposition(), plus, x) == pytest.approx(1.0, abs=1e-12)

def test_pauli_terms_are_uniform():
    decomp = pauli_decomposition()
    assert np.allclose(decomp.probabilities, 1 / 8)
    rng = np.random.default_rng(12)
    draws = [sample_term(decomp, rng)[2] for _ in range(8000)]
    assert set(draws) == {1, -1}

def test_psi1_kills_traceless_input():
    assert np.allclose(psi1_superop(2).apply(np.array([[0, 1], [1, 0]])), 0)

@pytest.mark.slow
def test_sampled_psi0_two_qubits():
    sampled = sampled_psi0(2, 100000, np.random.default_rng(21))
    assert np.linalg.norm(sampled.matrix - psi0_superop(4).matrix) <= 0.02

def test_dimension_checks():
    with pytest.raises(ChannelError):
        psi0_superop(3)
    with pytest.raises(ChannelError):
        psi0_superop(64)
    with pytest.raises(ChannelError):
        Superoperator(np.eye(3), 2)

def test_randomized_instance_keeps_basis_state():
    rng = np.random.default_rng(1)
    one = apply_gate(Statevector.zero(1), Gate('X', (0,)))
    state, record = RandomizedInstance(0, None, 5.0).execute(one, (0,), rng)
    assert record['bits'] == (1,)
    assert np.allclose(state.probabilities(), [0, 1])

def test_pauli_instance_folds_outcome_into_weight():
    rng = np.random.default_rng(2)
    one = apply_gate(Statevector.zero(1), Gate('X', (0,)))
    instance = PauliInstance('Z', (1,), 2.0)
    state, record = instance.execute(one, (0,), rng)
    assert record['outcome'] == -1
    assert record['weight'] == -2.0
    assert np.allclose(state.probabilities(), [1, 0])

def test_pauli_instance_can_run_twice():
    rng = np.random.default_rng(3)
    one = apply_gate(Statevector.zero(1), Gate('X', (0,)))
    instance = PauliInstance('Z', (1,), 2.0)
    records = [instance.execute(one, (0,), rng)[1] for _ in range(2)]
    assert [r['weight'] for r in records] == [-2.0, -2.0]
    assert instance.weight == 2.0

def test_draw_instance_weights():
    rng = np.random.default_rng(6)
    for _ in range(20):
        instance = draw_instance(randomized_decomposition(1), rng)
        assert instance.weight == (-5.0 if instance.z else 5.0)
        assert (instance.unitary is None) == bool(instance.z)
        assert abs(draw_instance(pauli_decomposition(), rng).weight) == 4.0

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
