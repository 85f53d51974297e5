"""
Experiment drivers behind the command-line subcommands.

Every stochastic quantity is seeded from (master seed, experiment indices),
so results depend on the seed but not on the worker count.
"""
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from bench.results import ResultRow, ResultTable
from cutting import (
    CutPlan, build_plan, estimate, exact_qtilde, sample_cut, sampling_overhead, shot_values,
)
from qaoa import (
    ClusteredGraphSpec, EdgePartition, QAOAParams, build_qaoa_circuit, cluster_partition, exact_cost,
    generate_clustered_graph, initial_params, maxcut_cost_operator, plan_qaoa_cuts,
)
from sim import exact_distribution
from utils.config import get_settings
from utils.log_setup import setup_project_logging
from utils.seeding import derived_seed

logger = setup_project_logging()

METHOD_INDEX = {'randomized': 0, 'pauli': 1}

@dataclass
class Instance:
    """A problem graph with its partition and the parameters to evaluate at"""
    graph: nx.Graph
    partition: EdgePartition
    p: int
    params: QAOAParams

    def circuit(self):
        return build_qaoa_circuit(self.graph, self.params, self.partition)

    def plan(self, method: str) -> CutPlan:
        return plan_qaoa_cuts(self.graph, self.partition, self.p, method)

    def exact(self) -> float:
        return exact_cost(self.graph, self.params)

def clustered_instance(
    r: int, n: int, k: int, p: int, seed: int, params: Optional[QAOAParams] = None, anchored: bool = True,
) -> Instance:
    """
    Generated chain graph, its cluster partition, and ramp parameters unless given.

    Anchored separators touch both neighbouring clusters, so each separator
    group of k vertices is cut as one group of k wires.
    """
    graph = generate_clustered_graph(ClusteredGraphSpec(r, n, k, seed=seed, anchored=anchored))
    return Instance(graph, cluster_partition(graph), p, params or initial_params(p))

def run_variance(
    instance: Instance,
    methods: Sequence[str],
    shots_grid: Sequence[int],
    seed: int,
    workers: int = 1,
    repetitions: Optional[int] = None,
) -> ResultTable:
    """
    Estimator spread as a function of the shot count.

    Each (method, shots) point repeats the estimate `repetitions` times; the
    row reports the mean of the repetition means, their standard deviation
    and the average per-shot variance.
    """
    repetitions = repetitions or get_settings().bench.repetitions
    exact = instance.exact()
    obs = maxcut_cost_operator(instance.graph)
    circuit = instance.circuit()
    table = ResultTable(metadata={
        'command': 'bench-variance', 'seed': seed, 'repetitions': repetitions,
        'num_vertices': instance.graph.number_of_nodes(), 'p': instance.p, 'params': instance.params.to_dict(),
    })
    for method in methods:
        plan = instance.plan(method)
        for shots in shots_grid:
            means, variances = [], []
            start = time.monotonic()
            for rep in range(repetitions):
                stream = derived_seed(seed, METHOD_INDEX[method], int(shots), rep)
                est = estimate(circuit, plan, obs, int(shots), stream, workers)
                means.append(est.mean)
                variances.append(est.variance)
            wall = time.monotonic() - start
            table.add(ResultRow(
                experiment_id=f"variance-{method}-{shots}", k_total=int(plan.num_cut_wires), p=instance.p,
                method=method, shots=int(shots), mean=float(np.mean(means)),
                stderr=float(np.std(means, ddof=1)), variance=float(np.mean(variances)),
                exact=float(exact), wall_time=float(wall),
            ))
            logger.info(f"{method} shots={shots}: mean {np.mean(means):.5f} (exact {exact:.5f})")
    return table

def run_cutsize(
    ks: Sequence[int],
    methods: Sequence[str],
    shots: int,
    seed: int,
    p: int = 1,
    n: int = 5,
    workers: int = 1,
) -> ResultTable:
    """Per-shot variance against the number of cut wires, one anchored two-cluster instance per k"""
    table = ResultTable(metadata={'command': 'bench-cutsize', 'seed': seed, 'p': p, 'n': n, 'ks': list(ks)})
    for k in ks:
        instance = clustered_instance(2, n, k, p, derived_seed(seed, k))
        exact = instance.exact()
        obs = maxcut_cost_operator(instance.graph)
        circuit = instance.circuit()
        for method in methods:
            plan = instance.plan(method)
            start = time.monotonic()
            est = estimate(circuit, plan, obs, shots, derived_seed(seed, k, METHOD_INDEX[method]), workers)
            wall = time.monotonic() - start
            bound = plan.overhead()
            if est.variance > bound ** 2:
                logger.warning(f"Variance {est.variance} above bound^2 {bound ** 2} for k={k} {method}")
            table.add(ResultRow(
                experiment_id=f"cutsize-{method}-k{k}", k_total=int(plan.num_cut_wires), p=p, method=method,
                shots=int(shots), mean=est.mean, stderr=est.stderr, variance=est.variance,
                exact=float(exact), wall_time=float(wall),
            ))
    return table

def fit_log2_slope(table: ResultTable, method: str) -> float:
    """Least-squares slope of log2(variance) against total cut wires"""
    rows = [r for r in table.for_method(method) if r.variance > 0]
    if len({r.k_total for r in rows}) < 2:
        raise ValueError(f"Need at least two distinct cut sizes to fit a slope for {method}")
    slope, _ = np.polyfit([r.k_total for r in rows], np.log2([r.variance for r in rows]), 1)
    return float(slope)

@dataclass
class SampleReport:
    bitstrings: List[int]
    mean_cut: float
    hit_rate: float
    bound: float
    overhead: int
    num_edges: int
    passed: bool
    exact_hit_probability: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            'shots': len(self.bitstrings), 'mean_cut': self.mean_cut, 'hit_rate': self.hit_rate,
            'bound': self.bound, 'overhead': self.overhead, 'num_edges': self.num_edges,
            'passed': self.passed, 'exact_hit_probability': self.exact_hit_probability,
        }

def cut_values(graph: nx.Graph, indices: np.ndarray) -> np.ndarray:
    """Number of edges cut by each basis state"""
    total = np.zeros(len(indices), dtype=int)
    for u, v in graph.edges():
        total += ((indices >> u) ^ (indices >> v)) & 1
    return total

def run_sample(
    instance: Instance,
    shots: int,
    seed: int,
    cut: bool = True,
    workers: int = 1,
) -> SampleReport:
    """
    Sample the (cut) QAOA circuit and report how often the cut reaches the
    expected cut value of the uncut state, against 1/(overhead * M).
    """
    circuit = instance.circuit()
    plan = instance.plan('randomized') if cut else build_plan(circuit, [])
    m = instance.graph.number_of_edges()
    mean_cut = m * (1 - instance.exact()) / 2
    bitstrings = sample_cut(circuit, plan, shots, seed, workers)
    hits = cut_values(instance.graph, np.array(bitstrings, dtype=np.int64)) >= mean_cut - 1e-9
    hit_rate = float(np.mean(hits))
    overhead = sampling_overhead(plan)
    bound = 1.0 / (overhead * m)
    slack = 5 * np.sqrt(bound * (1 - bound) / shots)
    exact_hit = None
    if circuit.num_qubits <= get_settings().caps.density_qubits:
        probs = exact_qtilde(circuit, plan) if cut else exact_distribution(circuit)
        good = cut_values(instance.graph, np.arange(probs.size)) >= mean_cut - 1e-9
        exact_hit = float(probs[good].sum())
    report = SampleReport(list(bitstrings), float(mean_cut), hit_rate, bound, overhead, m,
                          bool(hit_rate >= bound - slack), exact_hit)
    logger.info(f"Sampling: hit rate {hit_rate:.4f} against bound {bound:.4f} (overhead {overhead})")
    return report

@dataclass
class CircuitSampleReport:
    """Samples of an arbitrary circuit under a cut plan, with the q~ >= q/overhead check when exact"""
    bitstrings: List[int]
    num_qubits: int
    overhead: int
    min_ratio: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.min_ratio is None or self.min_ratio * self.overhead >= 1 - 1e-9

    def to_dict(self) -> Dict:
        return {
            'shots': len(self.bitstrings), 'num_qubits': self.num_qubits, 'overhead': self.overhead,
            'min_ratio': self.min_ratio, 'passed': self.passed,
        }

def run_circuit_sample(circuit, plan: CutPlan, shots: int, seed: int, workers: int = 1) -> CircuitSampleReport:
    """
    Sample a circuit loaded from file under a loaded (or empty) cut plan.

    With randomized groups only and a circuit under the density cap, min_ratio
    is the smallest q~(x)/q(x) over the support of q.
    """
    bitstrings = sample_cut(circuit, plan, shots, seed, workers)
    overhead = sampling_overhead(plan)
    caps = get_settings().caps
    min_ratio = None
    exact_ok = (
        circuit.num_qubits <= caps.density_qubits
        and len(plan.groups) <= caps.exact_cut_max_groups
        and all(g.method == 'randomized' for g in plan.groups)
    )
    if exact_ok:
        q = exact_distribution(circuit)
        q_tilde = exact_qtilde(circuit, plan)
        support = q > 1e-12
        min_ratio = float(np.min(q_tilde[support] / q[support]))
    logger.info(f"Sampled {shots} bitstrings of a {circuit.num_qubits}-qubit circuit (overhead {overhead})")
    return CircuitSampleReport(list(bitstrings), circuit.num_qubits, overhead, min_ratio)

def run_scaling(
    instance: Instance,
    workers_list: Sequence[int],
    shots: int,
    seed: int,
    method: str = 'randomized',
) -> Tuple[ResultTable, bool]:
    """
    Wall time of a fixed estimate at several worker counts.

    Returns:
        (table with one row per worker count, whether all shot arrays were identical);
        speedups go in the metadata
    """
    circuit = instance.circuit()
    plan = instance.plan(method)
    obs = maxcut_cost_operator(instance.graph)
    exact = instance.exact()
    table = ResultTable(metadata={'command': 'scaling', 'seed': seed, 'shots': shots, 'workers': list(workers_list)})
    reference = None
    identical = True
    times = []
    for workers in workers_list:
        start = time.monotonic()
        values = shot_values(circuit, plan, obs, shots, seed, workers)
        wall = time.monotonic() - start
        times.append(wall)
        if reference is None:
            reference = values
        elif not np.array_equal(values, reference):
            identical = False
        variance = float(np.var(values, ddof=1)) if shots > 1 else 0.0
        table.add(ResultRow(
            experiment_id=f"scaling-w{workers}", k_total=int(plan.num_cut_wires), p=instance.p, method=method,
            shots=int(shots), mean=float(np.mean(values)), stderr=float(np.sqrt(variance / shots)),
            variance=variance, exact=float(exact), wall_time=float(wall),
        ))
    speedups = [times[0] / t if t > 0 else 1.0 for t in times]
    table.metadata['speedup'] = speedups
    for a, b in zip(speedups, speedups[1:]):
        if b < a:
            logger.warning(f"Speedup dropped from {a:.2f} to {b:.2f}; worker counts {list(workers_list)}")
    if not identical:
        logger.error("Shot values differ between worker counts")
    return table, identical
