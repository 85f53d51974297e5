#!/usr/bin/env python3
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

# Define directory paths
SCRIPT_DIR = Path(__file__).parent
ROOT_DIR = SCRIPT_DIR.parent

# Add src directory to Python path
sys.path.append(str(ROOT_DIR / 'src'))

from bench.selftest import random_bipartite_circuit
from cutting import (
    CutGroup, CutPlanError, EstimationError, build_plan, estimate, exact_cut_expectation, exact_qtilde,
    load_plan, plan_bipartition, required_shots, sample_cut, sampling_overhead, save_plan, shot_values,
)
from sim import Circuit, Gate, MeasureZ, exact_distribution, exact_expectation, parity_observable
from utils.config import Settings, use_settings

def three_qubit_circuit() -> Circuit:
    """A block on wires 0,1 then a B block on wires 1,2"""
    return Circuit(3, (
        Gate('RY', (0,), 0.7), Gate('RY', (1,), 1.2), Gate('CNOT', (0, 1)), Gate('RZZ', (0, 1), 0.5),
        Gate('CNOT', (1, 2)), Gate('RY', (2,), 0.9), Gate('RZZ', (1, 2), 0.8),
        MeasureZ((0, 1, 2)),
    ))

def test_bipartition_plan_structure():
    plan = plan_bipartition(three_qubit_circuit(), [0, 1], [1, 2])
    assert len(plan.groups) == 1
    assert plan.groups[0].wires == (1,)
    assert plan.groups[0].position == 4
    assert len(plan.fragments) == 2
    assert plan.recyclable
    assert plan.overhead() == 5

@pytest.mark.parametrize('wires', [(0, 1, 2), (1,), (0, 2)])
def test_exact_cut_expectation_is_unbiased(wires):
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    obs = parity_observable(wires)
    assert exact_cut_expectation(circuit, plan, obs) == pytest.approx(exact_expectation(circuit, obs), abs=1e-10)

def test_two_wire_group_is_unbiased():
    circuit, a, b = random_bipartite_circuit(4, 2, seed=5)
    plan = plan_bipartition(circuit, a, b)
    assert plan.groups[0].size == 2
    assert plan.overhead() == 9
    obs = parity_observable(range(4))
    assert exact_cut_expectation(circuit, plan, obs) == pytest.approx(exact_expectation(circuit, obs), abs=1e-10)

@pytest.mark.parametrize('method, bound', [('randomized', 5), ('pauli', 4)])
def test_sampled_estimate_agrees_with_exact(method, bound):
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2], method=method)
    obs = parity_observable((0, 1, 2))
    result = estimate(circuit, plan, obs, 8000, 1234)
    assert result.per_shot_bound == bound
    assert result.stderr > 0
    assert abs(result.mean - exact_expectation(circuit, obs)) <= 5 * result.stderr

def looped_circuit() -> Circuit:
    """Wire 1 leaves the (0, 1) block for a (1, 2) block and comes back"""
    return Circuit(3, (
        Gate('RY', (0,), 0.4), Gate('RY', (1,), 1.1), Gate('CNOT', (0, 1)),
        Gate('RZZ', (1, 2), 0.7), Gate('RY', (2,), 0.5), Gate('CNOT', (1, 2)),
        Gate('RZZ', (0, 1), 0.9), Gate('RX', (1,), 0.3),
        MeasureZ((0, 1, 2)),
    ))

def test_no_cuts_reproduces_the_circuit():
    circuit = three_qubit_circuit()
    plan = build_plan(circuit, [])
    obs = parity_observable((0, 1, 2))
    assert plan.overhead() == 1
    assert exact_cut_expectation(circuit, plan, obs) == pytest.approx(exact_expectation(circuit, obs), abs=1e-10)

def test_cyclic_fragments_fall_back_to_op_order():
    circuit = looped_circuit()
    plan = build_plan(circuit, [CutGroup(3, (1,)), CutGroup(6, (1,))])
    assert len(plan.fragments) == 2
    assert not plan.recyclable
    assert plan.overhead() == 25
    obs = parity_observable((0, 1, 2))
    exact = exact_expectation(circuit, obs)
    assert exact_cut_expectation(circuit, plan, obs) == pytest.approx(exact, abs=1e-10)
    result = estimate(circuit, plan, obs, 20000, 77)
    assert abs(result.mean - exact) <= 5 * result.stderr

def test_shot_values_do_not_depend_on_workers():
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    obs = parity_observable((0, 2))
    serial = shot_values(circuit, plan, obs, 2000, 42, workers=1)
    pooled = shot_values(circuit, plan, obs, 2000, 42, workers=4)
    assert np.array_equal(serial, pooled)
    assert np.all(np.abs(serial) <= 5)

def test_shot_count_edge_cases():
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    obs = parity_observable((0,))
    with pytest.raises(EstimationError):
        estimate(circuit, plan, obs, 0, 1)
    single = estimate(circuit, plan, obs, 1, 1)
    assert single.stderr == 0.0
    assert abs(single.mean) == 5

def test_required_shots():
    assert required_shots(5, 0.1, 0.05) == 18445
    with pytest.raises(EstimationError):
        required_shots(5, 0.0, 0.05)

def test_qtilde_bound():
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    assert sampling_overhead(plan) == 5
    q = exact_distribution(circuit)
    q_tilde = exact_qtilde(circuit, plan)
    assert q_tilde.sum() == pytest.approx(1.0)
    assert np.all(q_tilde >= q / 5 - 1e-12)

def frequencies(bitstrings, num_qubits: int) -> np.ndarray:
    return np.bincount(np.array(bitstrings, dtype=np.int64), minlength=2 ** num_qubits) / len(bitstrings)

def test_sampled_bitstrings_follow_qtilde():
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    shots = 20000
    q_tilde = exact_qtilde(circuit, plan)
    observed = frequencies(sample_cut(circuit, plan, shots, 61), 3)
    sigma = np.sqrt(q_tilde * (1 - q_tilde) / shots)
    assert np.all(np.abs(observed - q_tilde) <= 5 * sigma + 1e-3)
    assert np.all(q_tilde >= exact_distribution(circuit) / 5 - 1e-12)

def test_empty_plan_samples_the_circuit():
    circuit = three_qubit_circuit()
    plan = build_plan(circuit, [])
    q = exact_distribution(circuit)
    assert np.allclose(exact_qtilde(circuit, plan), q, atol=1e-12)
    shots = 20000
    observed = frequencies(sample_cut(circuit, plan, shots, 62), 3)
    sigma = np.sqrt(q * (1 - q) / shots)
    assert np.all(np.abs(observed - q) <= 5 * sigma + 1e-3)

def test_bipartition_errors():
    circuit = three_qubit_circuit()
    with pytest.raises(CutPlanError):
        plan_bipartition(circuit, [0], [1, 2])
    with pytest.raises(CutPlanError):
        plan_bipartition(circuit, [0, 1], [2])
    with pytest.raises(CutPlanError):
        plan_bipartition(circuit, [0, 1], [1, 2], method='teleport')
    # a gate on (0, 1) after the B block started breaks C_B . C_A
    broken = Circuit(3, three_qubit_circuit().body() + (Gate('CNOT', (0, 1)), MeasureZ((0, 1, 2))))
    with pytest.raises(CutPlanError):
        plan_bipartition(broken, [0, 1], [1, 2])

def test_cut_group_validation():
    with pytest.raises(CutPlanError):
        CutGroup(1, ())
    with pytest.raises(CutPlanError):
        CutGroup(1, (0, 0))
    with pytest.raises(CutPlanError):
        build_plan(three_qubit_circuit(), [CutGroup(99, (1,))])

def test_plan_roundtrip(tmp_path):
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2], method='pauli')
    path = tmp_path / 'plan.json'
    save_plan(plan, path)
    loaded = load_plan(circuit, path)
    assert loaded.groups == plan.groups
    assert len(loaded.fragments) == len(plan.fragments)

def test_fragment_cap():
    settings = Settings()
    use_settings(replace(settings, caps=replace(settings.caps, statevector_qubits=1, density_qubits=1)))
    circuit = three_qubit_circuit()
    plan = plan_bipartition(circuit, [0, 1], [1, 2])
    with pytest.raises(EstimationError):
        estimate(circuit, plan, parity_observable((0,)), 10, 1)

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
