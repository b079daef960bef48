"""Paired sweeps over one arm's feedback rate.

In coupled mode every grid point reuses the same replicate tape streams, so
the two runs of a pair share every uniform; only the swept arm's feedback
thresholds move.  Because the feedback draw is monotone in the rate and
geometric waits are monotone the other way, paired differences inherit the
coupling structure and their variance is far below the independent design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.instance import Instance
from ..core.tapes import TapeSet
from ..metrics import MonotonicityVerdict, classify_monotonicity
from .runner import run_replicates

__all__ = ["SweepResult", "monotonicity_sweep", "paired_difference"]


@dataclass
class SweepResult:
    algorithm: str
    arm: int
    grid: List[float]
    coupled: bool
    replicates: int
    tolerance: float
    apc: Dict[float, np.ndarray] = field(repr=False, default_factory=dict)  # (R,) per f
    foc: Dict[float, np.ndarray] = field(repr=False, default_factory=dict)
    verdicts: Dict[str, MonotonicityVerdict] = field(default_factory=dict)

    def point_stats(self, measure: str) -> List[Tuple[float, float, float]]:
        data = self.apc if measure == "APC" else self.foc
        out = []
        for f in self.grid:
            vals = data[f]
            se = vals.std(ddof=1) / np.sqrt(len(vals)) if len(vals) > 1 else 0.0
            out.append((f, float(vals.mean()), float(se)))
        return out


def monotonicity_sweep(
    algorithm_id: str,
    instance: Instance,
    arm: int,
    f_grid: List[float],
    master_seed: int,
    replicates: int,
    params: Optional[dict] = None,
    coupled: bool = True,
    tolerance: Optional[float] = None,
    jobs: int = 1,
) -> SweepResult:
    """Estimate APC/FOC of ``arm`` at each grid rate and label the directions.

    The balance tolerance defaults to ``1/T``.
    """
    if not 0 <= arm < instance.num_arms:
        raise ValueError(f"arm index {arm} out of range")
    grid = sorted(set(float(f) for f in f_grid))
    if len(grid) < 2:
        raise ValueError("need at least two grid points")
    for f in grid:
        if not 0.0 < f <= 1.0:
            raise ValueError(f"grid rates must lie in (0, 1], got {f}")
    tol = (1.0 / instance.horizon) if tolerance is None else float(tolerance)
    result = SweepResult(
        algorithm=algorithm_id,
        arm=arm,
        grid=grid,
        coupled=coupled,
        replicates=replicates,
        tolerance=tol,
    )
    base_tapes = TapeSet(master_seed)
    for k, f in enumerate(grid):
        swept = instance.with_feedback_prob(arm, f)
        seed = master_seed if coupled else base_tapes.fork(k + 1).master_seed
        apc, foc, _ = run_replicates(
            algorithm_id, swept, seed, replicates, params, jobs
        )
        result.apc[f] = apc[:, arm]
        result.foc[f] = foc[:, arm]
    for measure in ("APC", "FOC"):
        result.verdicts[measure] = classify_monotonicity(
            result.point_stats(measure), tolerance=tol, measure=measure, arm=arm
        )
    return result


def paired_difference(
    result: SweepResult, f_low: float, f_high: float, measure: str
) -> Tuple[float, float]:
    """Mean and standard error of measure(f_high) - measure(f_low).

    Coupled sweeps difference replicate-by-replicate (the whole point of the
    shared tapes); independent sweeps pool the two standard errors.
    """
    data = result.apc if measure == "APC" else result.foc
    lo, hi = data[f_low], data[f_high]
    if result.coupled:
        diffs = hi - lo
        se = diffs.std(ddof=1) / np.sqrt(len(diffs)) if len(diffs) > 1 else 0.0
        return float(diffs.mean()), float(se)
    se = np.sqrt(lo.var(ddof=1) / len(lo) + hi.var(ddof=1) / len(hi))
    return float(hi.mean() - lo.mean()), float(se)
