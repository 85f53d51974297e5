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

from channels import psi1_superop, identity_superop
from sim import (
    CapExceededError, ChannelSlot, Circuit, Gate, MeasureZ, PrepareBasis, SimulationError, Statevector,
    exact_distribution, exact_expectation, format_bitstring, load_circuit, parity_observable, reduced_density,
    run_density, run_shot, save_circuit,
)
from sim.gates import rzz
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

def bell_circuit() -> Circuit:
    return Circuit(2, (Gate('H', (0,)), Gate('CNOT', (0, 1)), MeasureZ((0, 1))))

def three_qubit_circuit() -> Circuit:
    return Circuit(3, (
        Gate('RY', (0,), 0.7), Gate('RY', (1,), 1.9), Gate('CNOT', (0, 2)),
        Gate('RZZ', (1, 2), 0.4), Gate('RX', (2,), 1.1), MeasureZ((0, 1, 2)),
    ))

def test_gate_arity_and_wires():
    with pytest.raises(SimulationError):
        Gate('CNOT', (0,))
    with pytest.raises(SimulationError):
        Gate('RX', (0,))
    with pytest.raises(SimulationError):
        Circuit(2, (Gate('H', (2,)),))

def test_qubit_zero_is_least_significant():
    circuit = Circuit(3, (Gate('X', (0,)), MeasureZ((0, 1, 2))))
    probs = exact_distribution(circuit)
    assert probs[1] == pytest.approx(1.0)
    assert format_bitstring(1, 3) == '001'

def test_bell_distribution():
    probs = exact_distribution(bell_circuit())
    assert np.allclose(probs, [0.5, 0, 0, 0.5])

def test_rzz_convention():
    theta = 0.83
    minus, plus = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    assert np.allclose(rzz(theta), np.diag([minus, plus, plus, minus]))

def test_rx_expectation():
    theta = 0.6
    circuit = Circuit(1, (Gate('RX', (0,), theta), MeasureZ((0,))))
    assert exact_expectation(circuit, parity_observable([0])) == pytest.approx(np.cos(theta), abs=1e-12)

def test_run_shot_matches_born_rule():
    circuit = three_qubit_circuit()
    exact = exact_distribution(circuit)
    rng = np.random.default_rng(3)
    shots = 20000
    counts = np.bincount([run_shot(circuit, rng).bitstring for _ in range(shots)], minlength=8)
    sigma = np.sqrt(exact * (1 - exact) / shots)
    assert np.all(np.abs(counts / shots - exact) <= 5 * sigma + 1e-12)

def test_mid_circuit_record_drives_preparation():
    circuit = Circuit(2, (
        Gate('H', (0,)), MeasureZ((0,), 'a'), PrepareBasis((1,), source='a'), MeasureZ((0, 1), 'x'),
    ))
    rng = np.random.default_rng(5)
    for _ in range(50):
        result = run_shot(circuit, rng)
        assert result.record['x'][0] == result.record['x'][1] == result.record['a'][0]

def test_run_shot_errors():
    with pytest.raises(SimulationError):
        run_shot(Circuit(1, (Gate('H', (0,)),)), np.random.default_rng(0))
    slotted = Circuit(1, (ChannelSlot('c', (0,)), MeasureZ((0,))))
    with pytest.raises(SimulationError):
        run_shot(slotted, np.random.default_rng(0))

def test_density_matches_statevector():
    circuit = three_qubit_circuit()
    rho = run_density(circuit)
    assert np.allclose(rho.diagonal(), exact_distribution(circuit), atol=1e-12)

def test_density_channel_slot():
    circuit = bell_circuit().insert_slots([(2, 'c', (1,))])
    rho = run_density(circuit, {'c': psi1_superop(2)})
    assert np.allclose(reduced_density(rho, [1]), np.eye(2) / 2, atol=1e-12)
    # a depolarised half of a Bell pair leaves the pair maximally mixed
    assert np.allclose(rho.entries, np.eye(4) / 4, atol=1e-12)

def test_density_rejects_non_trace_preserving_binding():
    circuit = Circuit(1, (ChannelSlot('c', (0,)), MeasureZ((0,))))
    with pytest.raises(SimulationError):
        run_density(circuit, {'c': identity_superop(2).scaled(2.0)})
    with pytest.raises(SimulationError):
        run_density(circuit, {})

def test_statevector_cap():
    with pytest.raises(CapExceededError):
        Statevector.zero(17)

def test_circuit_json(tmp_path):
    path = tmp_path / 'circuit.json'
    circuit = three_qubit_circuit()
    save_circuit(circuit, path)
    assert load_circuit(path) == circuit

if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
