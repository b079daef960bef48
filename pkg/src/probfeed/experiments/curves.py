"""Two-instance curve study for the simplified three-phase runner.

Two constant-loss two-arm instances that differ only in which arm is good:
instance 1 gives the swept arm loss 0.9 (its pull count falls as its
feedback rate rises), instance 2 gives it loss 0.1 (pull count rises).  The
non-swept arm's rate is fixed at 1.0; that choice is explicit configuration,
recorded in the output metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import spearmanr

from ..core.instance import ConstantLoss, InstanceSpec, make_instance
from ..core.tapes import TapeSet
from ..metrics import compute_apc_foc
from ..transforms import run_algorithm

__all__ = ["CurveStudyResult", "two_instance_curve_study", "DEFAULT_GRID"]

DEFAULT_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))


@dataclass
class CurveStudyResult:
    grid: List[float]
    replicates: int
    fixed_arm_rate: float
    swept_losses: Tuple[float, float]  # swept arm's loss in instance 1 / 2
    # rows: (instance, f, apc_mean, apc_se)
    rows: List[tuple] = field(default_factory=list)
    spearman: Dict[int, float] = field(default_factory=dict)

    def curve(self, instance_label: int) -> List[tuple]:
        return [r for r in self.rows if r[0] == instance_label]


def two_instance_curve_study(
    master_seed: int,
    horizon: int = 1000,
    replicates: int = 500,
    grid: Optional[List[float]] = None,
    fixed_arm_rate: float = 1.0,
    algorithm: str = "three_phase_exp3_simplified",
) -> CurveStudyResult:
    grid = sorted(set(float(f) for f in (grid or DEFAULT_GRID)))
    result = CurveStudyResult(
        grid=grid,
        replicates=replicates,
        fixed_arm_rate=fixed_arm_rate,
        swept_losses=(0.9, 0.1),
    )
    tapes = TapeSet(master_seed)
    for label, (loss_swept, loss_other) in ((1, (0.9, 0.1)), (2, (0.1, 0.9))):
        means = []
        for f in grid:
            instance = make_instance(
                InstanceSpec(
                    num_arms=2,
                    horizon=horizon,
                    feedback_probs=(f, fixed_arm_rate),
                    loss_models=(ConstantLoss(loss_swept), ConstantLoss(loss_other)),
                )
            )
            apc0 = np.empty(replicates)
            for rep in range(replicates):
                trace = run_algorithm(algorithm, instance, tapes, rep)
                apc, _ = compute_apc_foc(trace, 2)
                apc0[rep] = apc[0]
            se = apc0.std(ddof=1) / np.sqrt(replicates) if replicates > 1 else 0.0
            means.append(float(apc0.mean()))
            result.rows.append((label, f, float(apc0.mean()), float(se)))
        rho = spearmanr(grid, means).statistic
        result.spearman[label] = float(rho)
    return result
