"""
Self-test suite: channel identities, the Clifford 2-design moment, exact
unbiasedness of the cut estimator, the q~ >= q / overhead bound and the
fragment counting formulas.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from channels import pauli_decomposition, randomized_decomposition, verify_identity
from cliffords import verify_2design
from cutting import CutPlan, exact_cut_expectation, exact_qtilde, plan_bipartition, sampling_overhead
from qaoa import (
    ClusteredGraphSpec, cluster_partition, count_fragment_configs, generate_clustered_graph,
    build_qaoa_circuit, initial_params, maxcut_cost_operator, max_fragment_qubits, plan_qaoa_cuts,
)
from sim import Circuit, DiagonalObservable, Gate, MeasureZ, exact_distribution, exact_expectation, parity_observable
from utils.config import get_settings
from utils.log_setup import setup_project_logging
from utils.seeding import derived_generator

logger = setup_project_logging()

@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict:
        return {'name': self.name, 'value': self.value, 'tolerance': self.tolerance, 'passed': self.passed}

@dataclass
class SelftestReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def record(self, name: str, value: float, tolerance: float, passed: Optional[bool] = None) -> Check:
        check = Check(name, float(value), float(tolerance), abs(value) <= tolerance if passed is None else passed)
        self.checks.append(check)
        level = logger.info if check.passed else logger.error
        level(f"{'PASS' if check.passed else 'FAIL'} {name}: {value:.3e} (tolerance {tolerance:.1e})")
        return check

    def to_dict(self) -> Dict:
        return {'passed': self.passed, 'checks': [c.to_dict() for c in self.checks]}

def random_bipartite_circuit(n: int, k: int, seed: int, depth: int = 3) -> Tuple[Circuit, List[int], List[int]]:
    """
    Random circuit C_B . C_A on n qubits where A and B share the k middle wires.

    Returns:
        (circuit, A wires, B wires)
    """
    rng = derived_generator(seed, n, k)
    split = (n + k) // 2
    a = list(range(split))
    b = list(range(split - k, n))
    ops = []
    for wires in (a, b):
        for _ in range(depth):
            for w in wires:
                kind = ('RX', 'RY', 'RZ')[int(rng.integers(3))]
                ops.append(Gate(kind, (w,), float(rng.uniform(0, 2 * np.pi))))
            for u, v in zip(wires, wires[1:]):
                if rng.random() < 0.5:
                    ops.append(Gate('RZZ', (u, v), float(rng.uniform(0, 2 * np.pi))))
                else:
                    ops.append(Gate('CNOT', (u, v)))
    ops.append(MeasureZ(tuple(range(n))))
    return Circuit(n, tuple(ops)), a, b

def unbiasedness_suite(seed: int = 11) -> List[Tuple[str, Circuit, CutPlan, DiagonalObservable]]:
    """Fixed set of small cut circuits: random bipartitions and clustered QAOA instances"""
    suite = []
    for n, k in ((3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (6, 2)):
        circuit, a, b = random_bipartite_circuit(n, k, seed)
        plan = plan_bipartition(circuit, a, b)
        suite.append((f"bipartite n={n} k={k} parity", circuit, plan, parity_observable(list(range(n)))))
        suite.append((f"bipartite n={n} k={k} Z0Z{n - 1}", circuit, plan, parity_observable([0, n - 1])))
    for r, n, k, p in ((2, 1, 1, 1), (2, 2, 1, 1), (3, 1, 1, 1), (2, 1, 1, 2)):
        graph = generate_clustered_graph(ClusteredGraphSpec(r, n, k, seed=seed))
        partition = cluster_partition(graph)
        circuit = build_qaoa_circuit(graph, initial_params(p), partition)
        plan = plan_qaoa_cuts(graph, partition, p)
        suite.append((f"qaoa r={r} n={n} k={k} p={p}", circuit, plan, maxcut_cost_operator(graph)))
    return suite

def run_selftest(corrupt: bool = False, design_samples: int = 0, seed: int = 11) -> SelftestReport:
    """
    Run every check and collect the results.

    Args:
        corrupt: flip the Pauli table signs, as a negative control for the identity check
        design_samples: draws for the sampled k=2 2-design check (0 skips it)
        seed: seed for the random suite circuits and the sampled check
    """
    tol = get_settings().tolerances
    report = SelftestReport()

    for k in (1, 2, 3):
        report.record(f"randomized identity d={2 ** k}", verify_identity(randomized_decomposition(k)),
                      tol.identity_residual)
    report.record("pauli identity", verify_identity(pauli_decomposition(corrupt=corrupt)), tol.identity_residual)
    report.record("pauli one-norm", pauli_decomposition().one_norm - 4, 1e-12)
    report.record("2-design k=1 exhaustive", verify_2design(1), tol.identity_residual)
    if design_samples:
        report.record("2-design k=2 sampled", verify_2design(2, 'sampled', design_samples, derived_generator(seed, 2)),
                      0.02)

    for name, circuit, plan, obs in unbiasedness_suite(seed):
        gap = exact_cut_expectation(circuit, plan, obs) - exact_expectation(circuit, obs)
        report.record(f"unbiased {name}", gap, tol.unbiasedness)
        if all(g.method == 'randomized' for g in plan.groups):
            q = exact_distribution(circuit)
            qtilde = exact_qtilde(circuit, plan)
            shortfall = float(np.max(q / sampling_overhead(plan) - qtilde))
            report.record(f"q~ >= q/overhead {name}", max(shortfall, 0.0), 1e-10)

    for (p, r, k), expected in {(2, 3, 1): 1812, (2, 4, 1): 3540, (2, 5, 1): 5268}.items():
        got = count_fragment_configs(p, r, k)
        report.record(f"fragment configs p={p} r={r} k={k}", got - expected, 0)
    report.record("fragment width n=25 p=2 k=1", max_fragment_qubits(25, 2, 1) - 30, 0)

    status = 'passed' if report.passed else f"failed ({len(report.failures())} checks)"
    logger.info(f"Selftest {status}")
    return report
