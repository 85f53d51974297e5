"""
QAOA parameter optimisation: a dense grid reference for p=1 and gradient
descent with central finite differences and backtracking.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import networkx as nx
import numpy as np

from cutting.estimator import estimate
from qaoa.ansatz import QAOAParams, build_qaoa_circuit, cost_diagonal, exact_cost, maxcut_cost_operator
from qaoa.partition import EdgePartition
from qaoa.planning import plan_qaoa_cuts
from utils.config import OptimizerSettings, get_settings
from utils.log_setup import setup_project_logging
from utils.seeding import derived_seed, run_all

logger = setup_project_logging()

# evaluator(params, stream) -> cost; `stream` selects the random numbers of a shot-based evaluator
Evaluator = Callable[[QAOAParams, int], float]

class OptimizationError(Exception):
    """Custom exception for optimiser setup errors"""
    pass

def exact_evaluator(graph: nx.Graph) -> Evaluator:
    diagonal = cost_diagonal(graph)
    return lambda params, stream: exact_cost(graph, params, diagonal)

def cut_evaluator(
    graph: nx.Graph,
    partition: EdgePartition,
    p: int,
    method: str,
    shots: int,
    seed: int,
    workers: int = 1,
) -> Evaluator:
    """Cut-estimated cost; probes sharing a stream share their shot seeds"""
    plan = plan_qaoa_cuts(graph, partition, p, method)
    obs = maxcut_cost_operator(graph)

    def evaluate(params: QAOAParams, stream: int) -> float:
        circuit = build_qaoa_circuit(graph, params, partition)
        return estimate(circuit, plan, obs, shots, derived_seed(seed, stream), workers).mean

    return evaluate

def grid_search(
    graph: nx.Graph,
    p: int = 1,
    resolution: Optional[int] = None,
    evaluator: Optional[Evaluator] = None,
) -> Tuple[QAOAParams, float]:
    """
    Best (gamma, beta) on a resolution x resolution grid over [0, pi)^2.

    Raises:
        OptimizationError: p != 1
    """
    if p != 1:
        raise OptimizationError("Grid search is only defined for p=1")
    resolution = resolution or get_settings().optimizer.grid_resolution
    evaluator = evaluator or exact_evaluator(graph)
    axis = np.arange(resolution) * np.pi / resolution
    best_params, best_cost = None, np.inf
    for gamma in axis:
        for beta in axis:
            params = QAOAParams((gamma,), (beta,))
            cost = evaluator(params, 0)
            if cost < best_cost:
                best_params, best_cost = params, cost
    logger.debug(f"Grid search {resolution}x{resolution}: best cost {best_cost:.6f} at {best_params}")
    return best_params, float(best_cost)

def initial_params(p: int, spread: float = 0.75) -> QAOAParams:
    """Linear ramp: gammas grow and betas shrink across the layers"""
    fractions = (np.arange(p) + 0.5) / p
    return QAOAParams(tuple(spread * fractions), tuple(spread * (1 - fractions)))

@dataclass
class OptimizationResult:
    params: QAOAParams
    trace: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

def optimize_params(
    graph: nx.Graph,
    p: int,
    evaluator: Evaluator,
    settings: Optional[OptimizerSettings] = None,
    shot_based: bool = False,
    initial: Optional[QAOAParams] = None,
    workers: int = 1,
) -> OptimizationResult:
    """
    Gradient descent on the QAOA cost.

    Each step evaluates the centre and the 4p central-difference probes as
    independent tasks sharing one random stream, then halves the learning
    rate until the cost drops. A step that never lowers the cost ends the run,
    so the trace is non-increasing for a deterministic evaluator.

    Args:
        graph: problem graph
        p: number of layers
        evaluator: cost function of (params, stream)
        settings: optimiser settings; defaults to the active config
        shot_based: use the larger finite-difference step for noisy evaluators
        initial: starting point; p=1 defaults to the best point of a coarse grid
        workers: threads for the probe evaluations

    Returns:
        OptimizationResult with the final parameters and the cost after every step
    """
    settings = settings or get_settings().optimizer
    h = settings.step_shots if shot_based else settings.step_exact
    if initial is None:
        if p == 1:
            initial, _ = grid_search(graph, 1, settings.warm_start_resolution, evaluator)
        else:
            initial = initial_params(p)
    if initial.p != p:
        raise OptimizationError(f"Initial parameters have p={initial.p}, expected {p}")

    x = initial.as_vector()
    dims = x.size
    result = OptimizationResult(initial)
    current = evaluator(initial, 0)
    result.trace.append(current)

    for iteration in range(1, settings.max_iterations + 1):
        stream = iteration
        probes = [x]
        for i in range(dims):
            step = np.zeros(dims)
            step[i] = h
            probes.extend([x + step, x - step])
        values = run_all([lambda v=v: evaluator(QAOAParams.from_vector(v), stream) for v in probes], workers)
        centre = values[0]
        gradient = np.array([(values[1 + 2 * i] - values[2 + 2 * i]) / (2 * h) for i in range(dims)])
        if np.linalg.norm(gradient) < settings.gradient_tolerance:
            result.converged = True
            break

        rate = settings.learning_rate
        accepted = None
        for _ in range(settings.max_halvings + 1):
            candidate = x - rate * gradient
            cost = evaluator(QAOAParams.from_vector(candidate), stream)
            if cost < centre:
                accepted = (candidate, cost)
                break
            rate /= 2
        if accepted is None:
            result.converged = True
            break
        x, current = accepted
        result.params = QAOAParams.from_vector(x)
        result.trace.append(current)
        result.iterations = iteration
        logger.debug(f"Step {iteration}: cost {current:.6f}, |grad| {np.linalg.norm(gradient):.3e}")

    logger.info(f"Optimisation p={p} finished after {result.iterations} steps at cost {result.trace[-1]:.6f}")
    return result
