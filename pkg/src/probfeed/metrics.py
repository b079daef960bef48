"""Engagement and regret measures over traces and replicate collections.

Per-arm pull counts and feedback-observation counts are exact trace
statistics; pseudo-regret compares the pulled arms' true mean losses against
the best arm (for oblivious adversarial tapes, against the best fixed arm on
the realized tape).  Aggregation uses plain sample standard errors and a
3-standard-error decision rule throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .core.instance import AdversarialLoss, Instance
from .core.trace import RunTrace

__all__ = [
    "MetricsSummary",
    "MonotonicityVerdict",
    "compute_apc_foc",
    "pseudo_regret",
    "pearson",
    "classify_monotonicity",
    "summarize_replicates",
]


def compute_apc_foc(trace: RunTrace, num_arms: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per-arm (pull count, feedback-observation count) for one trace."""
    apc = np.bincount(trace.arms, minlength=num_arms).astype(float)
    foc = np.bincount(trace.arms[trace.feedback], minlength=num_arms).astype(float)
    return apc, foc


def pseudo_regret(trace: RunTrace, instance: Instance) -> float:
    """Cumulative mean loss of the pulled arms minus the best arm's total.

    Stochastic and constant losses use the known means.  Adversarial
    instances are scored on the realized tapes against the best fixed arm in
    hindsight (the adversary is oblivious, so the tapes are the ground
    truth).
    """
    if instance.all_stochastic:
        means = instance.mean_losses
        return float(np.sum(means[trace.arms]) - trace.rounds * means.min())
    tapes = np.stack(
        [
            np.asarray(m.tape, dtype=float)
            if isinstance(m, AdversarialLoss)
            else np.full(instance.horizon, m.mean_loss())
            for m in instance.loss_models
        ]
    )
    rounds = np.arange(trace.rounds)
    algo_total = float(np.sum(tapes[trace.arms, rounds]))
    best_fixed = float(np.min(np.sum(tapes[:, : trace.rounds], axis=1)))
    return algo_total - best_fixed


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; rejects degenerate inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d arrays of equal length")
    if len(x) < 2:
        raise ValueError("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    return float(dx @ dy) / (sx * sy)


@dataclass
class MetricsSummary:
    """Monte Carlo estimates across replicates (means with standard errors)."""

    replicates: int
    apc_mean: np.ndarray
    apc_se: np.ndarray
    foc_mean: np.ndarray
    foc_se: np.ndarray
    regret_mean: float
    regret_se: float


def _se(values: np.ndarray, axis=0) -> np.ndarray:
    n = values.shape[axis]
    if n < 2:
        return np.zeros_like(np.mean(values, axis=axis), dtype=float)
    return np.std(values, axis=axis, ddof=1) / math.sqrt(n)


def summarize_replicates(
    apc: np.ndarray, foc: np.ndarray, regret: np.ndarray
) -> MetricsSummary:
    """Aggregate per-replicate (R, K) count matrices and an (R,) regret vector."""
    apc = np.atleast_2d(apc)
    foc = np.atleast_2d(foc)
    regret = np.atleast_1d(regret)
    return MetricsSummary(
        replicates=apc.shape[0],
        apc_mean=apc.mean(axis=0),
        apc_se=_se(apc),
        foc_mean=foc.mean(axis=0),
        foc_se=_se(foc),
        regret_mean=float(regret.mean()),
        regret_se=float(_se(regret)),
    )


@dataclass
class MonotonicityVerdict:
    """Direction of a measure as one arm's feedback rate sweeps a grid.

    Labels are evidence on the tested instance ("consistent with"), not a
    proof over all instances.  A label other than ``inconclusive`` is
    assigned only when the stated interval criterion holds for every
    adjacent pair of grid points.
    """

    measure: str
    arm: int
    label: str
    tolerance: float
    grid: List[float] = field(default_factory=list)
    means: List[float] = field(default_factory=list)
    ses: List[float] = field(default_factory=list)


def classify_monotonicity(
    estimates: Sequence[Tuple[float, float, float]],
    tolerance: float,
    measure: str = "",
    arm: int = -1,
) -> MonotonicityVerdict:
    """Label a per-f curve of (f, mean, se) triples.

    positive: every adjacent difference's 3-SE lower bound is > 0;
    negative: symmetric; balanced: every |difference| is within
    ``tolerance + 3 * pooled SE``; otherwise inconclusive.
    """
    pts = sorted(estimates)
    if len(pts) < 2:
        raise ValueError("need at least two grid points")
    diffs = []
    pooled = []
    for (f0, m0, s0), (f1, m1, s1) in zip(pts, pts[1:]):
        if f1 == f0:
            raise ValueError("grid points must be distinct")
        if not (math.isfinite(s0) and math.isfinite(s1)):
            raise ValueError("standard errors must be finite")
        diffs.append(m1 - m0)
        pooled.append(math.sqrt(s0 * s0 + s1 * s1))
    diffs = np.array(diffs)
    pooled = np.array(pooled)
    if np.all(diffs - 3.0 * pooled > 0.0):
        label = "positive"
    elif np.all(diffs + 3.0 * pooled < 0.0):
        label = "negative"
    elif np.all(np.abs(diffs) <= tolerance + 3.0 * pooled):
        label = "balanced"
    else:
        label = "inconclusive"
    return MonotonicityVerdict(
        measure=measure,
        arm=arm,
        label=label,
        tolerance=tolerance,
        grid=[p[0] for p in pts],
        means=[p[1] for p in pts],
        ses=[p[2] for p in pts],
    )
