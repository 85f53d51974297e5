"""
Circuit model: an ordered list of gates, mid-circuit measure/prepare markers
and channel slots on qubit wires.

Qubit 0 is the least-significant bit of every basis-state index.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

class SimulationError(Exception):
    """Custom exception for simulation errors"""
    pass

class CapExceededError(SimulationError):
    """Raised when a circuit is too wide for a dense simulator"""
    pass

ONE_QUBIT_GATES = {'H', 'X', 'Y', 'Z', 'S', 'SDG', 'RX', 'RY', 'RZ'}
TWO_QUBIT_GATES = {'CNOT', 'CZ', 'SWAP', 'RZZ'}
PARAMETRIC_GATES = {'RX', 'RY', 'RZ', 'RZZ'}

@dataclass(frozen=True)
class Gate:
    kind: str
    wires: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', self.kind.upper())
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))
        if self.kind in ONE_QUBIT_GATES:
            arity = 1
        elif self.kind in TWO_QUBIT_GATES:
            arity = 2
        else:
            raise SimulationError(f"Unknown gate kind: {self.kind}")
        if len(self.wires) != arity:
            raise SimulationError(f"{self.kind} acts on {arity} wire(s), got {list(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise SimulationError(f"{self.kind} wires must be distinct: {list(self.wires)}")
        if (self.kind in PARAMETRIC_GATES) != (self.angle is not None):
            raise SimulationError(f"{self.kind} angle mismatch: {self.angle}")

@dataclass(frozen=True)
class MeasureZ:
    wires: Tuple[int, ...]
    tag: str = 'm'

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))

@dataclass(frozen=True)
class PrepareBasis:
    """Reset wires to a basis state: the outcome recorded under `source` or fixed `bits`"""
    wires: Tuple[int, ...]
    source: Optional[str] = None
    bits: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))
        if (self.source is None) == (self.bits is None):
            raise SimulationError("PrepareBasis needs exactly one of source or bits")
        if self.bits is not None:
            bits = tuple(int(b) for b in self.bits)
            if len(bits) != len(self.wires) or any(b not in (0, 1) for b in bits):
                raise SimulationError(f"PrepareBasis bits {bits} do not match wires {self.wires}")
            object.__setattr__(self, 'bits', bits)

@dataclass(frozen=True)
class ChannelSlot:
    slot: str
    wires: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))
        if not self.wires:
            raise SimulationError(f"Channel slot {self.slot} has no wires")

CircuitOp = Union[Gate, MeasureZ, PrepareBasis, ChannelSlot]

@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: Tuple[CircuitOp, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'ops', tuple(self.ops))
        if self.num_qubits < 1:
            raise SimulationError(f"Circuit needs at least one qubit, got {self.num_qubits}")
        slots = set()
        for index, op in enumerate(self.ops):
            for w in op.wires:
                if not 0 <= w < self.num_qubits:
                    raise SimulationError(f"Op {index} wire {w} out of range for {self.num_qubits} qubits")
            if len(set(op.wires)) != len(op.wires):
                raise SimulationError(f"Op {index} repeats a wire: {list(op.wires)}")
            if isinstance(op, ChannelSlot):
                if op.slot in slots:
                    raise SimulationError(f"Duplicate channel slot id: {op.slot}")
                slots.add(op.slot)

    @property
    def gates(self) -> List[Tuple[int, Gate]]:
        return [(i, op) for i, op in enumerate(self.ops) if isinstance(op, Gate)]

    @property
    def slots(self) -> List[ChannelSlot]:
        return [op for op in self.ops if isinstance(op, ChannelSlot)]

    def terminal_start(self) -> int:
        """Index of the first op in the trailing run of MeasureZ ops"""
        start = len(self.ops)
        while start > 0 and isinstance(self.ops[start - 1], MeasureZ):
            start -= 1
        return start

    def body(self) -> Tuple[CircuitOp, ...]:
        """Ops before the terminal measurements"""
        return self.ops[:self.terminal_start()]

    def has_terminal_measurement(self) -> bool:
        return self.terminal_start() < len(self.ops)

    def with_ops(self, ops) -> 'Circuit':
        return Circuit(self.num_qubits, tuple(ops))

    def insert_slots(self, placements: List[Tuple[int, str, Tuple[int, ...]]]) -> 'Circuit':
        """Insert ChannelSlot ops before the given op positions; equal positions keep list order"""
        by_position: Dict[int, List[ChannelSlot]] = {}
        for position, slot, wires in placements:
            if not 0 <= position <= len(self.ops):
                raise SimulationError(f"Slot position {position} outside circuit of {len(self.ops)} ops")
            by_position.setdefault(position, []).append(ChannelSlot(slot, tuple(wires)))
        ops: List[CircuitOp] = []
        for index in range(len(self.ops) + 1):
            ops.extend(by_position.get(index, []))
            if index < len(self.ops):
                ops.append(self.ops[index])
        return self.with_ops(ops)

    def to_dict(self) -> Dict:
        return {'num_qubits': self.num_qubits, 'ops': [op_to_dict(op) for op in self.ops]}

    @classmethod
    def from_dict(cls, data: Dict) -> 'Circuit':
        try:
            return cls(int(data['num_qubits']), tuple(op_from_dict(op) for op in data['ops']))
        except (KeyError, TypeError, ValueError) as e:
            raise SimulationError(f"Malformed circuit JSON: {e}")

def op_to_dict(op: CircuitOp) -> Dict:
    if isinstance(op, Gate):
        entry = {'type': op.kind.lower(), 'wires': list(op.wires)}
        if op.angle is not None:
            entry['angle'] = op.angle
        return entry
    if isinstance(op, MeasureZ):
        return {'type': 'measure', 'wires': list(op.wires), 'tag': op.tag}
    if isinstance(op, PrepareBasis):
        entry = {'type': 'prepare', 'wires': list(op.wires)}
        if op.source is not None:
            entry['source'] = op.source
        else:
            entry['bits'] = list(op.bits)
        return entry
    return {'type': 'slot', 'wires': list(op.wires), 'slot': op.slot}

def op_from_dict(entry: Dict) -> CircuitOp:
    kind = entry['type'].lower()
    wires = tuple(entry['wires'])
    if kind == 'measure':
        return MeasureZ(wires, entry.get('tag', 'm'))
    if kind == 'prepare':
        bits = entry.get('bits')
        return PrepareBasis(wires, entry.get('source'), tuple(bits) if bits is not None else None)
    if kind == 'slot':
        return ChannelSlot(str(entry['slot']), wires)
    angle = entry.get('angle')
    return Gate(kind, wires, float(angle) if angle is not None else None)

def save_circuit(circuit: Circuit, path: Path) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(circuit.to_dict(), f, indent=2)

def load_circuit(path: Path) -> Circuit:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return Circuit.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        raise SimulationError(f"Could not read circuit {path}: {e}")

def bit_of(index: int, qubit: int) -> int:
    return (index >> qubit) & 1

def format_bitstring(index: int, num_qubits: int) -> str:
    """Most-significant qubit first, so the string reads as the binary index"""
    return format(index, f'0{num_qubits}b')
