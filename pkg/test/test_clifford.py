#!/usr/bin/env python3
import sys
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

# Define directory paths
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent

# Add src directory to Python path
sys.path.append(str(ROOT_DIR / 'src'))

from cliffords import (
    CliffordError, apply_tableau_to_pauli, conjugation_deviation, enumerate_single_qubit_cliffords,
    identity_tableau, is_symplectic, sample_uniform_clifford, tableau_to_unitary, verify_2design,
)
from cliffords.design import basis_second_moment, second_moment_deviation, second_moment_target
from sim.gates import H

def test_single_qubit_enumeration():
    tableaux = enumerate_single_qubit_cliffords()
    assert len(tableaux) == 24
    assert len({t.key() for t in tableaux}) == 24
    assert all(is_symplectic(t) for t in tableaux)

@pytest.mark.parametrize('k', [1, 2, 3, 4])
def test_sampled_tableau_is_symplectic_and_synthesised(k):
    rng = np.random.default_rng(100 + k)
    for _ in range(20):
        tableau = sample_uniform_clifford(k, rng)
        assert is_symplectic(tableau)
        unitary = tableau_to_unitary(tableau)
        assert np.allclose(unitary.conj().T @ unitary, np.eye(2 ** k), atol=1e-10)
        assert conjugation_deviation(tableau, unitary) < 1e-9

def test_k_out_of_range():
    rng = np.random.default_rng(0)
    with pytest.raises(CliffordError):
        sample_uniform_clifford(0, rng)
    with pytest.raises(CliffordError):
        sample_uniform_clifford(13, rng)

def test_single_qubit_sampling_is_uniform():
    rng = np.random.default_rng(2024)
    draws = 24000
    counts = Counter(sample_uniform_clifford(1, rng).key() for _ in range(draws))
    assert len(counts) == 24
    expected = draws / 24
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 23 degrees of freedom; 60 is far in the tail
    assert chi2 < 60

def test_exhaustive_2design():
    assert verify_2design(1) <= 1e-12
    with pytest.raises(CliffordError):
        verify_2design(2, mode='exhaustive')

def test_sampled_2design_two_qubits():
    deviation = verify_2design(2, mode='sampled', samples=20000, rng=np.random.default_rng(8))
    assert deviation <= 0.1

@pytest.mark.slow
def test_sampled_2design_two_qubits_full():
    deviation = verify_2design(2, mode='sampled', samples=100000, rng=np.random.default_rng(9))
    assert deviation <= 0.02

def two_copy_swap(d: int) -> np.ndarray:
    """W|a>|b> = |b>|a>, built by permuting the axes of the identity"""
    return np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)

def test_two_qubit_clifford_bases_average_to_swap_moment():
    d, draws = 4, 5000
    target = (np.eye(d * d) + two_copy_swap(d)) / (d + 1)
    assert np.allclose(second_moment_target(d), target)
    rng = np.random.default_rng(31)
    average = sum(
        basis_second_moment(tableau_to_unitary(sample_uniform_clifford(2, rng))) for _ in range(draws)
    ) / draws
    assert np.max(np.abs(average - target)) <= 0.05
    # the computational basis alone is far from the target
    assert np.max(np.abs(basis_second_moment(np.eye(d)) - target)) > 0.15

def test_two_element_set_is_not_a_design():
    assert second_moment_deviation([np.eye(2), H]) > 0.1

def test_identity_tableau_fixes_paulis():
    x, z = np.array([1, 0]), np.array([1, 1])
    out_x, out_z = apply_tableau_to_pauli(identity_tableau(2), x, z)
    assert np.array_equal(out_x, x) and np.array_equal(out_z, z)
    assert np.allclose(tableau_to_unitary(identity_tableau(2)), np.eye(4))

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
