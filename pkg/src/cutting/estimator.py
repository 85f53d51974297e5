"""
Cut estimators: sampled expectation values, exact z-enumeration references,
the sign-stripped output distribution and shot-count sizing.
"""
import itertools
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import numpy as np

from channels import psi0_superop, psi1_superop
from cutting.executor import EstimationError, FragmentProgram
from cutting.plan import CutPlan
from sim.circuit import Circuit
from sim.density import density_expectation, run_density
from sim.observables import DiagonalObservable
from utils.config import get_settings
from utils.log_setup import setup_project_logging
from utils.seeding import derived_generator, master_seed_of, run_indexed

logger = setup_project_logging()

class NumericalInvariantError(Exception):
    """Custom exception for violated numerical invariants (bounds, residuals)"""
    pass

@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    shots: int
    per_shot_bound: float
    variance: float = 0.0

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['bound'] = data.pop('per_shot_bound')
        return data

    @classmethod
    def from_values(cls, values: np.ndarray, bound: float) -> 'Estimate':
        shots = int(values.size)
        if shots == 0:
            raise EstimationError("No shot values to summarise")
        # a single shot carries no spread information
        variance = float(np.var(values, ddof=1)) if shots > 1 else 0.0
        return cls(float(np.mean(values)), math.sqrt(variance / shots), shots, float(bound), variance)

def plan_overhead(plan: CutPlan) -> float:
    """Per-shot bound of a plan's estimator"""
    return plan.overhead()

def sampling_overhead(plan: CutPlan) -> int:
    """Product of (2 d_j + 1), the factor by which q~ can fall below q"""
    return int(np.prod([2 * g.dim + 1 for g in plan.groups], dtype=object)) if plan.groups else 1

def required_shots(bound: float, epsilon: float, delta: float) -> int:
    """
    Hoeffding sample size for an estimator bounded by `bound` to reach additive
    error epsilon with probability at least 1 - delta.
    """
    if bound <= 0 or epsilon <= 0 or not 0 < delta < 1:
        raise EstimationError(f"Invalid Hoeffding inputs: bound={bound}, epsilon={epsilon}, delta={delta}")
    return int(math.ceil(2 * bound ** 2 * math.log(2 / delta) / epsilon ** 2))

def shot_values(
    circuit: Circuit,
    plan: CutPlan,
    obs: DiagonalObservable,
    shots: int,
    seed,
    workers: int = 1,
) -> np.ndarray:
    """
    Independent single-shot estimator values f(x) * prod_j scale_j * sign_j.

    Shot i uses the stream derived from (master seed, i), so the array does not
    depend on the worker count.

    Raises:
        EstimationError: shots < 1 or a fragment over the statevector cap
        NumericalInvariantError: a shot value above the per-shot bound
    """
    if shots < 1:
        raise EstimationError(f"shots must be >= 1, got {shots}")
    program = FragmentProgram(circuit, plan)
    bound = program.bound()
    master = master_seed_of(seed)

    def one_shot(i: int) -> float:
        bitstring, weight = program.run(derived_generator(master, i))
        value = obs(bitstring) * weight
        if abs(value) > bound * (1 + 1e-12):
            raise NumericalInvariantError(f"Shot {i} value {value} exceeds the per-shot bound {bound}")
        return value

    chunk = get_settings().bench.chunk_size
    return np.array(run_indexed(one_shot, shots, workers, chunk), dtype=float)

def estimate(
    circuit: Circuit,
    plan: CutPlan,
    obs: DiagonalObservable,
    shots: int,
    rng,
    workers: int = 1,
) -> Estimate:
    """
    Sampled cut estimate of <O_f>.

    Args:
        circuit: circuit the plan was built on
        plan: cut groups and fragments
        obs: diagonal observable with |f| <= 1
        shots: number of independent shots
        rng: integer master seed or a Generator to draw one from
        workers: thread count for the shot pool

    Returns:
        Estimate with mean, stderr = sample std / sqrt(shots) and the per-shot bound
    """
    values = shot_values(circuit, plan, obs, shots, rng, workers)
    result = Estimate.from_values(values, plan_overhead(plan))
    logger.debug(
        f"Cut estimate over {shots} shots: {result.mean:.6f} +/- {result.stderr:.6f} (bound {result.per_shot_bound:g})"
    )
    return result

def sample_cut(circuit: Circuit, plan: CutPlan, shots: int, rng, workers: int = 1) -> List[int]:
    """Terminal bitstrings of the cut circuit with signs and scales discarded"""
    if shots < 1:
        raise EstimationError(f"shots must be >= 1, got {shots}")
    program = FragmentProgram(circuit, plan)
    master = master_seed_of(rng)
    chunk = get_settings().bench.chunk_size
    return run_indexed(lambda i: program.run(derived_generator(master, i))[0], shots, workers, chunk)

def _randomized_only(plan: CutPlan) -> None:
    caps = get_settings().caps
    if any(g.method != 'randomized' for g in plan.groups):
        raise EstimationError("Exact z-enumeration is defined for randomized cut groups only")
    if len(plan.groups) > caps.exact_cut_max_groups:
        raise EstimationError(
            f"{len(plan.groups)} cut groups exceeds the exact enumeration cap of {caps.exact_cut_max_groups}"
        )

def _branches(circuit: Circuit, plan: CutPlan):
    """Yield (z, output density matrix) for every channel assignment"""
    superops = {g.dim: (psi0_superop(g.dim), psi1_superop(g.dim)) for g in plan.groups}
    placements = [(g.position, f"cut{j}", g.wires) for j, g in enumerate(plan.groups)]
    slotted = circuit.insert_slots(placements)
    for z in itertools.product((0, 1), repeat=len(plan.groups)):
        bindings = {f"cut{j}": superops[g.dim][zj] for j, (g, zj) in enumerate(zip(plan.groups, z))}
        yield z, run_density(slotted, bindings)

def exact_cut_expectation(circuit: Circuit, plan: CutPlan, obs: DiagonalObservable) -> float:
    """
    Expectation of the randomized cut estimator, by enumerating every z.

    Each branch is weighted by prod_j (d_j + 1) for z_j = 0 and -d_j for z_j = 1.

    Raises:
        EstimationError: non-randomized groups or too many groups
        CapExceededError: circuit wider than the density cap
    """
    _randomized_only(plan)
    total = 0.0
    for z, rho in _branches(circuit, plan):
        weight = 1.0
        for group, zj in zip(plan.groups, z):
            weight *= -group.dim if zj else group.dim + 1
        total += weight * density_expectation(rho, obs)
    return total

def exact_qtilde(circuit: Circuit, plan: CutPlan) -> np.ndarray:
    """z-averaged output distribution of the modified circuit (probability weights, no signs)"""
    _randomized_only(plan)
    q = np.zeros(2 ** circuit.num_qubits)
    for z, rho in _branches(circuit, plan):
        prob = 1.0
        for group, zj in zip(plan.groups, z):
            d = group.dim
            prob *= (d if zj else d + 1) / (2 * d + 1)
        q += prob * rho.diagonal()
    return q

def check_unbiased(
    circuit: Circuit, plan: CutPlan, obs: DiagonalObservable, reference: float, tol: Optional[float] = None
) -> float:
    """Exact cut expectation minus the uncut reference; raises when above tolerance"""
    tol = get_settings().tolerances.unbiasedness if tol is None else tol
    gap = exact_cut_expectation(circuit, plan, obs) - reference
    if abs(gap) > tol:
        raise NumericalInvariantError(f"Cut expectation misses the uncut value by {gap:.3e}")
    return gap
