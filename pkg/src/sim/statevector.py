"""
Dense statevector simulation with mid-circuit measurement by collapse.
"""
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Protocol, Sequence, Tuple

import numpy as np

from sim.circuit import (
    CapExceededError, ChannelSlot, Circuit, Gate, MeasureZ, PrepareBasis, SimulationError,
)
from sim.gates import apply_matrix, gate_matrix, qubit_axis
from sim.observables import DiagonalObservable
from utils.config import get_settings

@dataclass(frozen=True)
class Statevector:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** self.num_qubits:
            raise SimulationError(f"Statevector of {amps.size} amplitudes is not 2^{self.num_qubits}")
        amps.flags.writeable = False
        object.__setattr__(self, 'amplitudes', amps)

    @classmethod
    def zero(cls, num_qubits: int) -> 'Statevector':
        check_cap(num_qubits, get_settings().caps.statevector_qubits, 'statevector')
        amps = np.zeros(2 ** num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps, num_qubits)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0)

    def _replace(self, tensor: np.ndarray) -> 'Statevector':
        return Statevector(tensor.reshape(-1), self.num_qubits)

class ShotChannel(Protocol):
    """A concrete measure-and-prepare instance bound to a channel slot for one shot"""

    def execute(
        self, state: Statevector, wires: Tuple[int, ...], rng: np.random.Generator
    ) -> Tuple[Statevector, Dict]:
        ...

@dataclass
class ShotResult:
    bitstring: int
    record: Dict[str, object] = field(default_factory=dict)

def check_cap(num_qubits: int, cap: int, what: str) -> None:
    if num_qubits > cap:
        raise CapExceededError(f"{num_qubits} qubits exceeds the {what} cap of {cap}")

def check_wires(state: Statevector, wires: Sequence[int]) -> None:
    for w in wires:
        if not 0 <= w < state.num_qubits:
            raise SimulationError(f"Wire {w} out of range for {state.num_qubits} qubits")

def apply_unitary(state: Statevector, matrix: np.ndarray, wires: Sequence[int]) -> Statevector:
    check_wires(state, wires)
    tensor = apply_matrix(state.tensor(), matrix, wires, state.num_qubits)
    return state._replace(tensor)

def apply_gate(state: Statevector, op: Gate) -> Statevector:
    """Apply a gate; norm is preserved to rounding"""
    return apply_unitary(state, gate_matrix(op), op.wires)

def marginal_probabilities(state: Statevector, wires: Sequence[int]) -> np.ndarray:
    """Born probabilities of the listed wires; wires[0] is the least-significant bit"""
    check_wires(state, wires)
    n = state.num_qubits
    probs = np.abs(state.tensor()) ** 2
    keep = [qubit_axis(w, n) for w in reversed(wires)]
    others = tuple(ax for ax in range(n) if ax not in keep)
    reduced = probs.sum(axis=others) if others else probs
    # remaining axes are in increasing axis order; reorder to `keep`
    order = sorted(keep)
    reduced = np.transpose(reduced, [order.index(ax) for ax in keep])
    return reduced.reshape(-1)

def collapse(state: Statevector, wires: Sequence[int], bits: Sequence[int]) -> Statevector:
    """Project the wires onto the given basis outcome and renormalise"""
    n = state.num_qubits
    tensor = state.tensor()
    index = [slice(None)] * n
    for w, b in zip(wires, bits):
        index[qubit_axis(w, n)] = int(b)
    index = tuple(index)
    branch = tensor[index]
    p = float(np.vdot(branch, branch).real)
    if p <= 1e-300:
        raise SimulationError(f"Collapse onto zero-probability outcome {tuple(bits)} on wires {tuple(wires)}")
    out = np.zeros_like(tensor)
    out[index] = branch / np.sqrt(p)
    return state._replace(out)

def measure(
    state: Statevector, wires: Sequence[int], rng: np.random.Generator
) -> Tuple[Tuple[int, ...], Statevector]:
    """Sample a Z-basis outcome on the wires and collapse"""
    probs = marginal_probabilities(state, wires)
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise SimulationError(f"Measurement probabilities sum to {total}; state is corrupted")
    outcome = int(rng.choice(probs.size, p=probs / total))
    bits = tuple((outcome >> i) & 1 for i in range(len(wires)))
    return bits, collapse(state, wires, bits)

def flip(state: Statevector, wires: Sequence[int]) -> Statevector:
    """Apply X to each wire"""
    tensor = state.tensor()
    for w in wires:
        tensor = np.flip(tensor, axis=qubit_axis(w, state.num_qubits))
    return state._replace(np.ascontiguousarray(tensor))

def reset(
    state: Statevector, wires: Sequence[int], bits: Sequence[int], rng: np.random.Generator
) -> Statevector:
    """Discard the wires (measure, forget) and re-prepare them in |bits>"""
    current, state = measure(state, wires, rng)
    mismatched = [w for w, c, b in zip(wires, current, bits) if c != b]
    return flip(state, mismatched) if mismatched else state

def sample_bitstring(state: Statevector, rng: np.random.Generator) -> int:
    probs = state.probabilities()
    return int(rng.choice(probs.size, p=probs / probs.sum()))

def run_shot(
    circuit: Circuit,
    rng: np.random.Generator,
    channel_bindings: Optional[Mapping[str, ShotChannel]] = None,
) -> ShotResult:
    """
    Execute one shot of a circuit with mid-circuit measurements.

    Args:
        circuit: circuit ending in at least one MeasureZ
        rng: random stream for Born sampling and channel randomness
        channel_bindings: slot id -> concrete measure-and-prepare instance

    Returns:
        ShotResult with the terminal basis sample and every intermediate record

    Raises:
        SimulationError: no terminal measurement, unbound slot, unknown record
    """
    bindings = channel_bindings or {}
    if not circuit.has_terminal_measurement():
        raise SimulationError("no terminal measurement")
    for slot in circuit.slots:
        if slot.slot not in bindings:
            raise SimulationError(f"Channel slot {slot.slot} has no binding")

    state = Statevector.zero(circuit.num_qubits)
    record: Dict[str, object] = {}
    for op in circuit.body():
        if isinstance(op, Gate):
            state = apply_gate(state, op)
        elif isinstance(op, MeasureZ):
            bits, state = measure(state, op.wires, rng)
            record[op.tag] = bits
        elif isinstance(op, PrepareBasis):
            if op.source is not None:
                if op.source not in record:
                    raise SimulationError(f"PrepareBasis reads unknown record {op.source}")
                bits = record[op.source]
            else:
                bits = op.bits
            if len(bits) != len(op.wires):
                raise SimulationError(f"Record {op.source} has {len(bits)} bits for {len(op.wires)} wires")
            state = reset(state, op.wires, bits, rng)
        elif isinstance(op, ChannelSlot):
            state, slot_record = bindings[op.slot].execute(state, op.wires, rng)
            record[op.slot] = slot_record

    # trailing MeasureZ ops read the whole register at once
    bitstring = sample_bitstring(state, rng)
    for op in circuit.ops[circuit.terminal_start():]:
        record[op.tag] = tuple((bitstring >> w) & 1 for w in op.wires)
    return ShotResult(bitstring, record)

def final_state(circuit: Circuit) -> Statevector:
    """Statevector after the unitary body of a circuit"""
    state = Statevector.zero(circuit.num_qubits)
    for op in circuit.body():
        if not isinstance(op, Gate):
            raise SimulationError(
                f"Exact statevector evaluation needs a unitary circuit; found {type(op).__name__}"
            )
        state = apply_gate(state, op)
    return state

def exact_distribution(circuit: Circuit) -> np.ndarray:
    """Output distribution q(x) of a unitary circuit"""
    return final_state(circuit).probabilities()

def exact_expectation(circuit: Circuit, obs: DiagonalObservable) -> float:
    """Sum over x of |<x|psi>|^2 f(x)"""
    probs = exact_distribution(circuit)
    return float(np.dot(probs, obs.table(circuit.num_qubits)))
