"""
Max-Cut cost operator and the QAOA circuit.

Cost unitary exp(-i gamma H_C) is applied as RZZ(2 gamma) per edge, the mixer
as RX(2 beta) per qubit, starting from |+>^n.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from qaoa.graphs import graph_edges
from qaoa.partition import EdgePartition, natural_partition
from sim.circuit import Circuit, Gate, MeasureZ, SimulationError
from sim.gates import apply_matrix, rx
from sim.observables import DiagonalObservable, edge_sum_observable
from sim.statevector import check_cap
from utils.config import get_settings

class QAOAParamsError(Exception):
    """Custom exception for malformed QAOA parameters"""
    pass

@dataclass(frozen=True)
class QAOAParams:
    gammas: Tuple[float, ...]
    betas: Tuple[float, ...]

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        betas = tuple(float(b) for b in self.betas)
        if len(gammas) != len(betas) or not gammas:
            raise QAOAParamsError(f"Need equal, non-zero numbers of gammas and betas; got {len(gammas)} and {len(betas)}")
        object.__setattr__(self, 'gammas', gammas)
        object.__setattr__(self, 'betas', betas)

    @property
    def p(self) -> int:
        return len(self.gammas)

    def as_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> 'QAOAParams':
        vector = list(vector)
        half = len(vector) // 2
        return cls(tuple(vector[:half]), tuple(vector[half:]))

    @classmethod
    def zeros(cls, p: int) -> 'QAOAParams':
        return cls((0.0,) * p, (0.0,) * p)

    def to_dict(self) -> Dict:
        return {'gammas': list(self.gammas), 'betas': list(self.betas)}

    @classmethod
    def from_dict(cls, data: Dict) -> 'QAOAParams':
        try:
            return cls(tuple(data['gammas']), tuple(data['betas']))
        except (KeyError, TypeError) as e:
            raise QAOAParamsError(f"Malformed params JSON: {e}")

def save_params(params: QAOAParams, path: Path) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(params.to_dict(), f, indent=2)

def load_params(path: Path) -> QAOAParams:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return QAOAParams.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        raise QAOAParamsError(f"Could not read params {path}: {e}")

def maxcut_cost_operator(graph: nx.Graph) -> DiagonalObservable:
    """f(x) = (1/M) sum over edges of (-1)^(x_i xor x_j), in [-1, 1]"""
    edges = graph_edges(graph)
    if not edges:
        raise SimulationError("Max-Cut cost needs at least one edge")
    return edge_sum_observable(edges)

@dataclass(frozen=True)
class QAOALayout:
    """
    A QAOA circuit and where its pieces sit.

    `labels` maps gate index -> partition part; `block_starts[l][j]` is the
    op index of the first RZZ of part j in layer l, `layer_starts[l]` the
    first RZZ of layer l.
    """
    circuit: Circuit
    labels: Dict[int, int]
    block_starts: Tuple[Tuple[int, ...], ...]
    layer_starts: Tuple[int, ...]
    rx_indices: Tuple[Tuple[int, ...], ...] = field(default=())

def build_qaoa_layout(graph: nx.Graph, params: QAOAParams, order: Optional[EdgePartition] = None) -> QAOALayout:
    """Circuit plus partition labels; parts are applied contiguously in every layer"""
    partition = order if order is not None else natural_partition(graph)
    if not partition.covers(graph):
        raise SimulationError("Edge order does not cover the graph's edge set exactly")
    n = graph.number_of_nodes()
    if sorted(graph.nodes()) != list(range(n)):
        raise SimulationError("Graph vertices must be numbered 0..n-1")

    ops: List = []
    labels: Dict[int, int] = {}
    first_label: Dict[int, int] = {}
    for j, part in enumerate(partition.parts):
        for u, v in part:
            first_label.setdefault(u, j)
            first_label.setdefault(v, j)

    for q in range(n):
        if q in first_label:
            labels[len(ops)] = first_label[q]
        ops.append(Gate('H', (q,)))

    block_starts, layer_starts, rx_indices = [], [], []
    for gamma, beta in zip(params.gammas, params.betas):
        layer_starts.append(len(ops))
        starts = []
        last_label: Dict[int, int] = {}
        for j, part in enumerate(partition.parts):
            starts.append(len(ops))
            for u, v in part:
                labels[len(ops)] = j
                last_label[u] = j
                last_label[v] = j
                ops.append(Gate('RZZ', (u, v), 2 * gamma))
        block_starts.append(tuple(starts))
        layer_rx = []
        for q in range(n):
            if q in last_label:
                labels[len(ops)] = last_label[q]
            layer_rx.append(len(ops))
            ops.append(Gate('RX', (q,), 2 * beta))
        rx_indices.append(tuple(layer_rx))
    ops.append(MeasureZ(tuple(range(n)), tag='x'))
    return QAOALayout(Circuit(n, tuple(ops)), labels, tuple(block_starts), tuple(layer_starts), tuple(rx_indices))

def build_qaoa_circuit(graph: nx.Graph, params: QAOAParams, order: Optional[EdgePartition] = None) -> Circuit:
    """H on all qubits, then per layer RZZ(2 gamma) per edge and RX(2 beta) per qubit, then measure"""
    return build_qaoa_layout(graph, params, order).circuit

def cost_diagonal(graph: nx.Graph) -> np.ndarray:
    """Unnormalised sum of Z_i Z_j on every basis state"""
    n = graph.number_of_nodes()
    indices = np.arange(2 ** n)
    total = np.zeros(2 ** n)
    for u, v in graph_edges(graph):
        total += 1.0 - 2.0 * (((indices >> u) ^ (indices >> v)) & 1)
    return total

def exact_cost(graph: nx.Graph, params: QAOAParams, diagonal: Optional[np.ndarray] = None) -> float:
    """
    <H_C>/M for the QAOA state, using the diagonal form of the cost unitary.
    Agrees with exact_expectation on build_qaoa_circuit.
    """
    n = graph.number_of_nodes()
    check_cap(n, get_settings().caps.statevector_qubits, 'statevector')
    diagonal = cost_diagonal(graph) if diagonal is None else diagonal
    m = graph.number_of_edges()
    state = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    for gamma, beta in zip(params.gammas, params.betas):
        state = state * np.exp(-1j * gamma * diagonal)
        tensor = state.reshape((2,) * n)
        mixer = rx(2 * beta)
        for q in range(n):
            tensor = apply_matrix(tensor, mixer, (q,), n)
        state = tensor.reshape(-1)
    return float(np.dot(np.abs(state) ** 2, diagonal) / m)
