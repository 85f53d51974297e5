"""
Cut plans: groups of parallel wires removed at a position in the op order,
and the fragments that remain.

A cut group at `position` sits immediately before op `position`. Each wire is
split into segments by the cuts on it; gates join the segments they touch and
the connected components are the fragments. When gate labels are given,
all gates with one label are merged into a single fragment.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from sim.circuit import Circuit, Gate
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

METHODS = ('randomized', 'pauli')

class CutPlanError(Exception):
    """Custom exception for invalid cut plans"""
    pass

@dataclass(frozen=True)
class CutGroup:
    position: int
    wires: Tuple[int, ...]
    method: str = 'randomized'

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))
        if not self.wires:
            raise CutPlanError("nothing to cut: cut group has no wires")
        if len(set(self.wires)) != len(self.wires):
            raise CutPlanError(f"Cut group repeats a wire: {list(self.wires)}")
        if self.method not in METHODS:
            raise CutPlanError(f"Unknown cut method: {self.method}")

    @property
    def size(self) -> int:
        return len(self.wires)

    @property
    def dim(self) -> int:
        return 2 ** len(self.wires)

    def to_dict(self) -> Dict:
        return {'position': self.position, 'wires': list(self.wires), 'method': self.method}

@dataclass(frozen=True)
class Fragment:
    index: int
    gate_indices: Tuple[int, ...]
    support: Tuple[int, ...]
    incoming: Tuple[int, ...] = ()
    outgoing: Tuple[int, ...] = ()
    label: Optional[Hashable] = None

    @property
    def width(self) -> int:
        return len(self.support)

@dataclass(frozen=True)
class CutPlan:
    """
    Groups plus the fragment decomposition they induce.

    `segment_owner[(wire, s)]` is the fragment holding segment s of a wire;
    `recyclable` is True when the fragment communication graph is acyclic.
    """
    groups: Tuple[CutGroup, ...]
    fragments: Tuple[Fragment, ...]
    segment_owner: Mapping[Tuple[int, int], int] = field(repr=False)
    num_qubits: int = 0
    recyclable: bool = True

    @property
    def num_cut_wires(self) -> int:
        return sum(g.size for g in self.groups)

    def communication_graph(self) -> nx.MultiDiGraph:
        """Fragments as nodes, one edge per cut wire from upstream to downstream fragment"""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(f.index for f in self.fragments)
        for j, group in enumerate(self.groups):
            for w in group.wires:
                up, down = self.wire_endpoints(j, w)
                graph.add_edge(up, down, group=j, wire=w)
        return graph

    def segment_index(self, wire: int, position: int) -> int:
        """Segment of `wire` that an op at `position` acts on"""
        return sum(1 for g in self.groups if wire in g.wires and g.position <= position)

    def wire_endpoints(self, group_index: int, wire: int) -> Tuple[int, int]:
        group = self.groups[group_index]
        before = sum(1 for g in self.groups if wire in g.wires and g.position < group.position)
        return self.segment_owner[(wire, before)], self.segment_owner[(wire, before + 1)]

    def final_owner(self, wire: int) -> int:
        last = sum(1 for g in self.groups if wire in g.wires)
        return self.segment_owner[(wire, last)]

    def fragment_order(self) -> List[int]:
        """Topological order when recyclable, else plain index order"""
        if not self.recyclable:
            return [f.index for f in self.fragments]
        return list(nx.lexicographical_topological_sort(nx.DiGraph(self.communication_graph())))

    def overhead(self) -> float:
        """Product of the group one-norms: 2d+1 per randomized group, 4^k per Pauli group"""
        total = 1.0
        for group in self.groups:
            total *= (2 * group.dim + 1) if group.method == 'randomized' else 4.0 ** group.size
        return total

    def to_dict(self) -> Dict:
        return {'groups': [g.to_dict() for g in self.groups]}

class _UnionFind:
    def __init__(self):
        self.parent: Dict = {}

    def add(self, item) -> None:
        self.parent.setdefault(item, item)

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller key wins so component identity is deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

def _check_plannable(circuit: Circuit) -> int:
    body = circuit.body()
    for index, op in enumerate(body):
        if not isinstance(op, Gate):
            raise CutPlanError(
                f"Op {index} is a {type(op).__name__}; cut planning needs a unitary body and terminal measurement"
            )
    if not circuit.has_terminal_measurement():
        raise CutPlanError("Circuit has no terminal measurement")
    return len(body)

def build_plan(
    circuit: Circuit,
    groups: Sequence[CutGroup],
    labels: Optional[Mapping[int, Hashable]] = None,
) -> CutPlan:
    """
    Discover the fragments induced by a list of cut groups.

    Args:
        circuit: unitary body followed by terminal measurement
        groups: cut groups, in any order
        labels: optional gate index -> label; same-label gates share a fragment and no fragment may mix labels

    Returns:
        CutPlan with fragments in order of their first segment

    Raises:
        CutPlanError: bad positions, duplicate cuts, labels mixed inside a fragment,
            or a randomized group whose wires do not share one upstream and one
            downstream fragment
    """
    body_len = _check_plannable(circuit)
    n = circuit.num_qubits
    groups = tuple(sorted(groups, key=lambda g: (g.position, g.wires)))

    cuts_per_wire: Dict[int, List[int]] = {w: [] for w in range(n)}
    for group in groups:
        if not 0 <= group.position <= body_len:
            raise CutPlanError(f"Cut position {group.position} outside circuit body of {body_len} ops")
        for w in group.wires:
            if not 0 <= w < n:
                raise CutPlanError(f"Cut wire {w} out of range for {n} qubits")
            if group.position in cuts_per_wire[w]:
                raise CutPlanError(f"Wire {w} cut twice at position {group.position}")
            cuts_per_wire[w].append(group.position)

    def segment(w: int, position: int) -> Tuple[int, int]:
        return w, sum(1 for p in cuts_per_wire[w] if p <= position)

    uf = _UnionFind()
    for w in range(n):
        for s in range(len(cuts_per_wire[w]) + 1):
            uf.add((w, s))
    for index, gate in circuit.gates:
        segs = [segment(w, index) for w in gate.wires]
        for other in segs[1:]:
            uf.union(segs[0], other)
    if labels is not None:
        # gates sharing a label are co-simulated as one fragment
        first_of_label: Dict[Hashable, Tuple[int, int]] = {}
        for index, gate in circuit.gates:
            if index in labels:
                seg = segment(gate.wires[0], index)
                uf.union(first_of_label.setdefault(labels[index], seg), seg)

    # fragments numbered by their smallest segment
    roots = sorted({uf.find(seg) for seg in uf.parent})
    root_index = {root: i for i, root in enumerate(roots)}
    owner = {seg: root_index[uf.find(seg)] for seg in uf.parent}

    gate_lists: List[List[int]] = [[] for _ in roots]
    supports: List[set] = [set() for _ in roots]
    for seg, frag in owner.items():
        supports[frag].add(seg[0])
    for index, gate in circuit.gates:
        gate_lists[owner[segment(gate.wires[0], index)]].append(index)

    frag_labels: List[Optional[Hashable]] = [None] * len(roots)
    if labels is not None:
        for frag, gate_indices in enumerate(gate_lists):
            seen = {labels[i] for i in gate_indices if i in labels}
            if len(seen) > 1:
                raise CutPlanError(f"Fragment {frag} mixes gate labels {sorted(map(str, seen))}")
            frag_labels[frag] = next(iter(seen)) if seen else None

    incoming: List[List[int]] = [[] for _ in roots]
    outgoing: List[List[int]] = [[] for _ in roots]
    for j, group in enumerate(groups):
        ups, downs = set(), set()
        for w in group.wires:
            before = sum(1 for p in cuts_per_wire[w] if p < group.position)
            ups.add(owner[(w, before)])
            downs.add(owner[(w, before + 1)])
        if group.method == 'randomized' and (len(ups) > 1 or len(downs) > 1):
            raise CutPlanError(
                f"Randomized cut group at {group.position} on wires {list(group.wires)} spans several fragments"
            )
        for up in sorted(ups):
            outgoing[up].append(j)
        for down in sorted(downs):
            incoming[down].append(j)

    fragments = tuple(
        Fragment(i, tuple(gate_lists[i]), tuple(sorted(supports[i])), tuple(incoming[i]),
                 tuple(outgoing[i]), frag_labels[i])
        for i in range(len(roots))
    )
    plan = CutPlan(groups, fragments, owner, n, True)
    recyclable = nx.is_directed_acyclic_graph(nx.DiGraph(plan.communication_graph()))
    plan = CutPlan(groups, fragments, owner, n, recyclable)
    logger.debug(
        f"Cut plan: {len(groups)} groups, {plan.num_cut_wires} wires, {len(fragments)} fragments, "
        f"recyclable={recyclable}"
    )
    return plan

def plan_bipartition(circuit: Circuit, a: Sequence[int], b: Sequence[int], method: str = 'randomized') -> CutPlan:
    """
    Cut a circuit of the form C_B . C_A on the wires shared by A and B.

    The boundary is the first gate not contained in A; every later gate must
    be contained in B.

    Raises:
        CutPlanError: A and B do not cover the register, share no wire, or a gate
            breaks the composed form
    """
    a, b = set(a), set(b)
    if a | b != set(range(circuit.num_qubits)):
        raise CutPlanError(f"A and B must cover all {circuit.num_qubits} qubits")
    shared = sorted(a & b)
    if not shared:
        raise CutPlanError("nothing to cut: A and B share no wire")
    body_len = _check_plannable(circuit)

    boundary = body_len
    for index, gate in circuit.gates:
        if not set(gate.wires) <= a:
            boundary = index
            break
    for index, gate in circuit.gates:
        if index >= boundary and not set(gate.wires) <= b:
            raise CutPlanError(
                f"Gate {index} ({gate.kind} on {list(gate.wires)}) is outside B after the A block ends"
            )
    return build_plan(circuit, [CutGroup(boundary, tuple(shared), method)])

def plan_from_dict(circuit: Circuit, data: Dict) -> CutPlan:
    try:
        groups = [CutGroup(int(g['position']), tuple(g['wires']), g.get('method', 'randomized'))
                  for g in data['groups']]
    except (KeyError, TypeError, ValueError) as e:
        raise CutPlanError(f"Malformed cut plan JSON: {e}")
    return build_plan(circuit, groups)

def save_plan(plan: CutPlan, path: Path) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(plan.to_dict(), f, indent=2)

def load_plan(circuit: Circuit, path: Path) -> CutPlan:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return plan_from_dict(circuit, json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        raise CutPlanError(f"Could not read cut plan {path}: {e}")
