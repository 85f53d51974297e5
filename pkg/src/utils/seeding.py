from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar('T')

def as_generator(seed) -> np.random.Generator:
    """Accept a Generator, an int seed or None"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)

def derived_generator(master_seed: int, *index: int) -> np.random.Generator:
    """Independent stream for (master seed, index...), stable across worker counts"""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(i) for i in index)))
    )

def derived_seed(master_seed: int, *index: int) -> int:
    """Integer seed for a sub-task, for APIs that take seeds rather than generators"""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(i) for i in index))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))

def chunk_ranges(total: int, chunk_size: int) -> List[range]:
    """Fixed partition of [0, total) into index ranges"""
    return [range(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]

def run_indexed(
    task: Callable[[int], T],
    count: int,
    workers: int = 1,
    chunk_size: int = 512,
) -> List[T]:
    """
    Evaluate task(i) for i in range(count) and return results in index order.

    The partition into chunks is fixed, so the output does not depend on the
    number of workers.
    """
    results: List[Optional[T]] = [None] * count

    def run_chunk(indices: range) -> None:
        for i in indices:
            results[i] = task(i)

    chunks = chunk_ranges(count, max(1, chunk_size))
    if workers <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            run_chunk(chunk)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # list() re-raises the first worker exception
            list(pool.map(run_chunk, chunks))
    return results  # type: ignore[return-value]

def run_all(tasks: Sequence[Callable[[], T]], workers: int = 1) -> List[T]:
    """Run independent zero-argument tasks, returning results in task order"""
    if workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda task: task(), tasks))

def master_seed_of(seed) -> int:
    """Integer master seed from an int, or one draw from a Generator"""
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(2 ** 63 - 1))
    if seed is None:
        raise ValueError("A seed is required for stochastic runs")
    return int(seed)
