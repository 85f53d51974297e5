from .graphs import (
    GraphGenerationError, ClusteredGraphSpec, generate_clustered_graph, chain_layout, graph_edges,
    known_separator, graph_to_dict, graph_from_dict, save_graph, load_graph,
)
from .partition import (
    PartitionError, EdgePartition, natural_partition, separator_partition, cluster_partition,
    find_balanced_separator, is_balanced,
)
from .ansatz import (
    QAOAParamsError, QAOAParams, QAOALayout, maxcut_cost_operator, build_qaoa_layout, build_qaoa_circuit,
    cost_diagonal, exact_cost, save_params, load_params,
)
from .planning import (
    plan_qaoa_cuts, qaoa_cut_groups, count_fragment_configs, max_fragment_qubits,
    qaoa_shot_bound, qaoa_required_shots,
)
from .optimize import (
    OptimizationError, OptimizationResult, exact_evaluator, cut_evaluator, grid_search,
    initial_params, optimize_params,
)

__all__ = [
    'GraphGenerationError', 'ClusteredGraphSpec', 'generate_clustered_graph', 'chain_layout', 'graph_edges',
    'known_separator', 'graph_to_dict', 'graph_from_dict', 'save_graph', 'load_graph',
    'PartitionError', 'EdgePartition', 'natural_partition', 'separator_partition', 'cluster_partition',
    'find_balanced_separator', 'is_balanced',
    'QAOAParamsError', 'QAOAParams', 'QAOALayout', 'maxcut_cost_operator', 'build_qaoa_layout',
    'build_qaoa_circuit', 'cost_diagonal', 'exact_cost', 'save_params', 'load_params',
    'plan_qaoa_cuts', 'qaoa_cut_groups', 'count_fragment_configs', 'max_fragment_qubits',
    'qaoa_shot_bound', 'qaoa_required_shots',
    'OptimizationError', 'OptimizationResult', 'exact_evaluator', 'cut_evaluator', 'grid_search',
    'initial_params', 'optimize_params',
]
