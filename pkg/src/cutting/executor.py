"""
Per-shot execution of a cut circuit, one local statevector per fragment.

Each cut group splits into a measure half, run on the upstream fragment, and
a prepare half, run on the downstream fragment. The outcomes recorded by the
measure half drive the prepare half.
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from channels import pauli_decomposition, sample_term
from channels.instances import measure_pauli, prepare_pauli
from cliffords import sample_uniform_clifford, tableau_to_unitary
from cutting.plan import CutPlan
from sim.circuit import Circuit, SimulationError
from sim.gates import gate_matrix
from sim.observables import DiagonalObservable
from sim.statevector import Statevector, apply_unitary, measure, reset, sample_bitstring
from utils.config import get_settings

class EstimationError(Exception):
    """Custom exception for cut-estimation setup errors"""
    pass

@dataclass(frozen=True)
class _Event:
    kind: str  # 'gate', 'measure' or 'prepare'
    fragment: int
    local_wires: Tuple[int, ...]
    matrix: np.ndarray = None
    group: int = -1
    member: int = 0  # wire position inside a Pauli group

_SINGLE_WIRE_PAULI = pauli_decomposition()

class FragmentProgram:
    """A cut circuit compiled into fragment-local events"""

    def __init__(self, circuit: Circuit, plan: CutPlan):
        if plan.num_qubits != circuit.num_qubits:
            raise EstimationError(
                f"Plan built for {plan.num_qubits} qubits used with a {circuit.num_qubits}-qubit circuit"
            )
        cap = get_settings().caps.statevector_qubits
        for fragment in plan.fragments:
            if fragment.width > cap:
                raise EstimationError(
                    f"Fragment {fragment.index} too wide: {fragment.width} qubits exceeds the cap of {cap}"
                )
        self.circuit = circuit
        self.plan = plan
        self.local: List[Dict[int, int]] = [
            {w: i for i, w in enumerate(f.support)} for f in plan.fragments
        ]
        self.widths = [f.width for f in plan.fragments]
        self.final_wires: List[List[Tuple[int, int]]] = [[] for _ in plan.fragments]
        for w in range(circuit.num_qubits):
            frag = plan.final_owner(w)
            self.final_wires[frag].append((w, self.local[frag][w]))
        self.events = self._schedule()

    def _local(self, frag: int, wires) -> Tuple[int, ...]:
        return tuple(self.local[frag][w] for w in wires)

    def _schedule(self) -> List[_Event]:
        plan = self.plan
        # (position, tie-break, event); cuts at a position precede the op there
        timeline: List[Tuple[int, int, _Event]] = []
        for index, gate in self.circuit.gates:
            frag = plan.segment_owner[(gate.wires[0], plan.segment_index(gate.wires[0], index))]
            timeline.append((index, 2, _Event('gate', frag, self._local(frag, gate.wires), gate_matrix(gate))))
        for j, group in enumerate(plan.groups):
            up, down = plan.wire_endpoints(j, group.wires[0])
            if group.method == 'randomized':
                timeline.append((group.position, 0, _Event('measure', up, self._local(up, group.wires), group=j)))
                timeline.append((group.position, 1, _Event('prepare', down, self._local(down, group.wires), group=j)))
            else:
                for m, w in enumerate(group.wires):
                    up, down = plan.wire_endpoints(j, w)
                    timeline.append((group.position, 0, _Event('measure', up, self._local(up, (w,)), group=j, member=m)))
                    timeline.append((group.position, 1, _Event('prepare', down, self._local(down, (w,)), group=j, member=m)))
        timeline.sort(key=lambda item: (item[0], item[1]))
        events = [event for _, _, event in timeline]

        if plan.recyclable:
            # stable sort keeps op order inside each fragment
            rank = {frag: i for i, frag in enumerate(plan.fragment_order())}
            events.sort(key=lambda e: rank[e.fragment])
        return events

    def bound(self) -> float:
        """Largest possible |shot value|"""
        return self.plan.overhead()

    def _draw(self, rng: np.random.Generator) -> Tuple[List, float]:
        """Channel settings for every group, and the product of scale times sign"""
        draws = []
        weight = 1.0
        for group in self.plan.groups:
            if group.method == 'randomized':
                d = group.dim
                z = int(rng.random() < d / (2 * d + 1))
                unitary = None if z else tableau_to_unitary(sample_uniform_clifford(group.size, rng))
                draws.append({'z': z, 'unitary': unitary, 'outcomes': None})
                weight *= (2 * d + 1) * (-1 if z else 1)
            else:
                terms = []
                for _ in group.wires:
                    term, scale, sign = sample_term(_SINGLE_WIRE_PAULI, rng)
                    terms.append(term)
                    weight *= scale * sign
                draws.append({'terms': terms})
        return draws, weight

    def run(self, rng: np.random.Generator) -> Tuple[int, float]:
        """
        One shot.

        Returns:
            (bitstring, product of scales and signs including measured Pauli eigenvalues)
        """
        states = [Statevector.zero(width) for width in self.widths]
        draws, weight = self._draw(rng)
        for event in self.events:
            state = states[event.fragment]
            if event.kind == 'gate':
                states[event.fragment] = apply_unitary(state, event.matrix, event.local_wires)
                continue
            draw = draws[event.group]
            if self.plan.groups[event.group].method == 'randomized':
                if event.kind == 'measure':
                    if draw['unitary'] is not None:
                        state = apply_unitary(state, draw['unitary'].conj().T, event.local_wires)
                    bits, state = measure(state, event.local_wires, rng)
                    draw['outcomes'] = bits
                else:
                    if draw['z']:
                        bits = tuple(int(b) for b in rng.integers(2, size=len(event.local_wires)))
                    else:
                        bits = draw['outcomes']
                    state = reset(state, event.local_wires, bits, rng)
                    if draw['unitary'] is not None:
                        state = apply_unitary(state, draw['unitary'], event.local_wires)
                states[event.fragment] = state
            else:
                term = draw['terms'][event.member]
                if event.kind == 'measure':
                    state, eigenvalue = measure_pauli(state, event.local_wires, term.paulis, rng)
                    weight *= eigenvalue
                else:
                    state = prepare_pauli(state, event.local_wires, term.paulis, term.eigenvalues[0], rng)
                states[event.fragment] = state

        if get_settings().debug:
            check_fragment_states(states)
        bitstring = 0
        for frag, wires in enumerate(self.final_wires):
            if not wires:
                continue
            local = sample_bitstring(states[frag], rng)
            for w, i in wires:
                bitstring |= ((local >> i) & 1) << w
        return bitstring, weight

def shot_value(program: FragmentProgram, obs: DiagonalObservable, rng: np.random.Generator) -> float:
    bitstring, weight = program.run(rng)
    return obs(bitstring) * weight

def check_fragment_states(states: List[Statevector]) -> None:
    tol = get_settings().tolerances.norm
    for i, state in enumerate(states):
        if state is not None and state.norm_error() > tol:
            raise SimulationError(f"Fragment {i} state lost normalisation ({state.norm_error():.3e})")
