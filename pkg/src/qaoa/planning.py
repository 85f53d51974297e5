"""
Cut plans for partition-ordered QAOA circuits, the fragment-count and width
formulas, and the shot bounds that go with them.
"""
import math
from typing import Dict, List, Tuple

import networkx as nx

from cutting.plan import CutGroup, CutPlan, CutPlanError, build_plan
from qaoa.ansatz import QAOAParams, build_qaoa_layout
from qaoa.partition import EdgePartition, PartitionError
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

def qaoa_cut_groups(layout, method: str = 'randomized') -> List[CutGroup]:
    """
    Cut groups for a labelled QAOA layout.

    A wire is cut wherever consecutive gates on it carry different labels.
    Inside a layer the cut sits at the start of the receiving part's block;
    between layers it sits at the start of the next layer's cost block. Wires
    crossing from the same source part to the same destination part at the
    same position form one group.
    """
    circuit = layout.circuit
    previous: Dict[int, int] = {}
    layer_of: Dict[int, int] = {}
    for layer, start in enumerate(layout.layer_starts):
        end = layout.rx_indices[layer][-1]
        for index in range(start, end + 1):
            layer_of[index] = layer
    part_start = {}
    for layer, starts in enumerate(layout.block_starts):
        for j, start in enumerate(starts):
            part_start[(layer, j)] = start

    crossings: Dict[Tuple[int, int, int], List[int]] = {}
    for index, gate in circuit.gates:
        label = layout.labels.get(index)
        for w in gate.wires:
            prev = previous.get(w)
            previous[w] = index
            if prev is None or label is None or layout.labels.get(prev) is None:
                continue
            src = layout.labels[prev]
            if src == label:
                continue
            if gate.kind != 'RZZ':
                raise CutPlanError(f"Label change on wire {w} at non-cost gate {index}")
            layer = layer_of[index]
            if layer_of.get(prev) == layer:
                position = part_start[(layer, label)]
            else:
                position = layout.layer_starts[layer]
            crossings.setdefault((position, src, label), []).append(w)

    return [CutGroup(position, tuple(sorted(wires)), method)
            for (position, _, _), wires in sorted(crossings.items())]

def plan_qaoa_cuts(
    graph: nx.Graph,
    partition: EdgePartition,
    p: int,
    method: str = 'randomized',
) -> CutPlan:
    """
    Cut plan for the p-layer circuit ordered by `partition`.

    The plan depends only on the gate layout, so it applies to
    build_qaoa_circuit(graph, params, partition) for any params with p layers.

    Raises:
        PartitionError: partition does not cover the graph
        CutPlanError: a structural bound is violated
    """
    if not partition.covers(graph):
        raise PartitionError("Edge partition does not cover the graph's edges")
    layout = build_qaoa_layout(graph, QAOAParams.zeros(p), partition)
    groups = qaoa_cut_groups(layout, method)
    plan = build_plan(layout.circuit, groups, labels=layout.labels)

    overlaps = partition.num_overlaps()
    kappa = partition.overlap()
    if len(groups) > (2 * p - 1) * overlaps:
        raise CutPlanError(f"{len(groups)} cut groups exceeds (2p-1) * {overlaps} overlapping part pairs")
    if any(g.size > kappa for g in groups):
        raise CutPlanError(f"A cut group is wider than the overlap kappa={kappa}")
    for fragment in plan.fragments:
        if fragment.label is not None and set(fragment.support) != set(partition.vertices(fragment.label)):
            raise CutPlanError(
                f"Fragment {fragment.index} support {list(fragment.support)} differs from V(g_{fragment.label})"
            )
    logger.info(
        f"QAOA cut plan p={p}: {len(groups)} groups, {plan.num_cut_wires} cut wires, "
        f"widest fragment {max(f.width for f in plan.fragments)} qubits"
    )
    return plan

def count_fragment_configs(p: int, r: int, k: int) -> int:
    """3^{pk} 4^{(p-1)k} + (r-2) 12^{(2p-1)k} + 3^{(p-1)k} 4^{pk}, in exact integers"""
    if p < 1 or k < 1 or r < 2:
        raise ValueError(f"Need p >= 1, k >= 1, r >= 2; got p={p}, r={r}, k={k}")
    return (3 ** (p * k) * 4 ** ((p - 1) * k)
            + (r - 2) * 12 ** ((2 * p - 1) * k)
            + 3 ** ((p - 1) * k) * 4 ** (p * k))

def max_fragment_qubits(n: int, p: int, k: int) -> int:
    """Widest fragment when each cut wire is simulated by an extra qubit: n + (3p-1)k"""
    return n + (3 * p - 1) * k

def qaoa_shot_bound(kappa: int, p: int) -> int:
    """Per-shot bound (2^{kappa+1} + 1)^{2p-1} for one overlap"""
    return (2 ** (kappa + 1) + 1) ** (2 * p - 1)

def qaoa_required_shots(kappa: int, p: int, epsilon: float) -> int:
    """Shots 4^{(2p-1)(kappa+2)} / epsilon^2 for additive error epsilon"""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return int(math.ceil(4 ** ((2 * p - 1) * (kappa + 2)) / epsilon ** 2))
