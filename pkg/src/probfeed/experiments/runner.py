"""Replicate execution: per-replicate derived randomness, optional processes.

Replicate ``r`` of a run reads only tape streams keyed by ``r``, so results
are independent of execution order and of the parallelism degree; aggregation
always happens in replicate-index order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Tuple

import numpy as np

from ..core.instance import Instance
from ..core.tapes import TapeSet
from ..metrics import MetricsSummary, compute_apc_foc, pseudo_regret, summarize_replicates
from ..transforms import run_algorithm, validate_algorithm

__all__ = ["run_replicates", "replicate_run"]


def _run_chunk(args) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    algorithm_id, instance, master_seed, rep_start, rep_count, params = args
    tapes = TapeSet(master_seed)
    K = instance.num_arms
    apc = np.empty((rep_count, K))
    foc = np.empty((rep_count, K))
    regret = np.empty(rep_count)
    for i in range(rep_count):
        trace = run_algorithm(algorithm_id, instance, tapes, rep_start + i, params)
        a, f = compute_apc_foc(trace, K)
        apc[i] = a
        foc[i] = f
        regret[i] = pseudo_regret(trace, instance)
    return apc, foc, regret


def run_replicates(
    algorithm_id: str,
    instance: Instance,
    master_seed: int,
    replicates: int,
    params: Optional[dict] = None,
    jobs: int = 1,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-replicate (R, K) pull/observation counts and (R,) pseudo-regret."""
    params = params or {}
    validate_algorithm(algorithm_id, instance, params)
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    jobs = max(1, min(jobs, replicates))
    if jobs == 1:
        return _run_chunk((algorithm_id, instance, master_seed, 0, replicates, params))
    bounds = np.linspace(0, replicates, jobs + 1).astype(int)
    tasks = [
        (algorithm_id, instance, master_seed, int(lo), int(hi - lo), params)
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_run_chunk, tasks))
    apc = np.concatenate([p[0] for p in parts])
    foc = np.concatenate([p[1] for p in parts])
    regret = np.concatenate([p[2] for p in parts])
    return apc, foc, regret


def replicate_run(
    algorithm_id: str,
    instance: Instance,
    master_seed: int,
    replicates: int,
    params: Optional[dict] = None,
    jobs: int = 1,
) -> MetricsSummary:
    """Monte Carlo summary over independent replicates."""
    apc, foc, regret = run_replicates(
        algorithm_id, instance, master_seed, replicates, params, jobs
    )
    return summarize_replicates(apc, foc, regret)
