"""
Second-moment (unitary 2-design) check for randomized measurement bases.

For a 2-design, the average over U of sum_j (U|j><j|U^dag)^{(x)2} equals
(1 (x) 1 + W)/(d + 1), where W swaps the two tensor factors.
"""
from typing import Iterable, Optional

import numpy as np

from cliffords.tableau import (
    CliffordError, enumerate_single_qubit_cliffords, sample_uniform_clifford, tableau_to_unitary,
)
from utils.log_setup import setup_project_logging

logger = setup_project_logging()

def swap_operator(d: int) -> np.ndarray:
    w = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            w[a * d + b, b * d + a] = 1.0
    return w

def second_moment_target(d: int) -> np.ndarray:
    return (np.eye(d * d) + swap_operator(d)) / (d + 1)

def basis_second_moment(unitary: np.ndarray) -> np.ndarray:
    """sum over j of (U|j><j|U^dag) tensor (U|j><j|U^dag)"""
    d = unitary.shape[0]
    doubled = np.stack([np.kron(unitary[:, j], unitary[:, j]) for j in range(d)], axis=1)
    return doubled @ doubled.conj().T

def second_moment_deviation(unitaries: Iterable[np.ndarray]) -> float:
    """Frobenius distance between the averaged basis moment and the 2-design target"""
    total = None
    count = 0
    for u in unitaries:
        moment = basis_second_moment(u)
        total = moment if total is None else total + moment
        count += 1
    if count == 0:
        raise CliffordError("No unitaries to average")
    d = int(round(np.sqrt(total.shape[0])))
    return float(np.linalg.norm(total / count - second_moment_target(d)))

def verify_2design(
    k: int,
    mode: str = 'exhaustive',
    samples: int = 100000,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """
    Deviation of the k-qubit Clifford ensemble from the 2-design moment.

    Args:
        k: number of qubits
        mode: 'exhaustive' (k=1 only, all 24 Cliffords) or 'sampled'
        samples: draws for the sampled mode
        rng: random stream for the sampled mode

    Returns:
        Frobenius norm of the moment difference
    """
    if mode == 'exhaustive':
        if k != 1:
            raise CliffordError("Exhaustive 2-design check is only available for k=1")
        deviation = second_moment_deviation(tableau_to_unitary(t) for t in enumerate_single_qubit_cliffords())
    elif mode == 'sampled':
        if rng is None:
            raise CliffordError("Sampled 2-design check needs a random stream")
        deviation = second_moment_deviation(
            tableau_to_unitary(sample_uniform_clifford(k, rng)) for _ in range(samples)
        )
    else:
        raise CliffordError(f"Unknown 2-design mode: {mode}")
    logger.info(f"2-design deviation k={k} mode={mode}: {deviation:.3e}")
    return deviation
