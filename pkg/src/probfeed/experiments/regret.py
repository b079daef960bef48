"""Regret growth across horizons and the uncorrected-baseline demonstration.

The sweep reruns an algorithm family on the same loss/rate shape at
increasing horizons and reports the doubling diagnostic
``regret(2T) / regret(T)``: near 2 means linear growth, well below means
sublinear.  The baseline demonstration runs uncorrected reward-form
exponential weights on a two-arm instance whose optimal arm reveals feedback
only a quarter of the time; its per-round regret stays bounded away from
zero while the certain-feedback twin (same estimator means, all rates 1)
vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..core.instance import ConstantLoss, Instance, InstanceSpec, make_instance
from .runner import run_replicates

__all__ = [
    "RegretSweepResult",
    "regret_sweep",
    "linear_regret_demo",
    "baseline_instance",
    "certain_feedback_twin",
]


def baseline_instance(horizon: int) -> Instance:
    """Two arms: mean utilities 1 (rate 1/4) and 1/2 (rate 1), as losses."""
    return make_instance(
        InstanceSpec(
            num_arms=2,
            horizon=horizon,
            feedback_probs=(0.25, 1.0),
            loss_models=(ConstantLoss(0.0), ConstantLoss(0.5)),
        )
    )


def certain_feedback_twin(horizon: int) -> Instance:
    """Same estimator means under certain feedback: losses (0.75, 0.5)."""
    return make_instance(
        InstanceSpec(
            num_arms=2,
            horizon=horizon,
            feedback_probs=(1.0, 1.0),
            loss_models=(ConstantLoss(0.75), ConstantLoss(0.5)),
        )
    )


@dataclass
class RegretSweepResult:
    algorithm: str
    horizons: List[int]
    replicates: int
    # rows: (algorithm, horizon, regret_mean, regret_se)
    rows: List[tuple] = field(default_factory=list)

    def regret_at(self, horizon: int) -> float:
        for _, h, mean, _ in self.rows:
            if h == horizon:
                return mean
        raise KeyError(horizon)

    def doubling_ratios(self) -> Dict[int, float]:
        """``regret(2T)/regret(T)`` for every doubling pair present.

        Pairs whose denominator is zero (possible at toy horizons) are
        omitted rather than reported as infinite.
        """
        out = {}
        for h in self.horizons:
            if 2 * h in self.horizons and self.regret_at(h) != 0.0:
                out[h] = self.regret_at(2 * h) / self.regret_at(h)
        return out


def regret_sweep(
    algorithm_id: str,
    instance_family,
    horizons: List[int],
    master_seed: int,
    replicates: int,
    params: Optional[dict] = None,
    jobs: int = 1,
) -> RegretSweepResult:
    """``instance_family(horizon) -> Instance`` must keep losses/rates fixed."""
    horizons = sorted(set(int(h) for h in horizons))
    if sorted(horizons) != horizons or len(horizons) < 1:
        raise ValueError("horizons must be a non-empty increasing list")
    result = RegretSweepResult(
        algorithm=algorithm_id, horizons=horizons, replicates=replicates
    )
    for h in horizons:
        instance = instance_family(h)
        if instance.horizon != h:
            raise ValueError("instance_family must honor the requested horizon")
        _, _, regret = run_replicates(
            algorithm_id, instance, master_seed, replicates, params, jobs
        )
        se = regret.std(ddof=1) / np.sqrt(len(regret)) if len(regret) > 1 else 0.0
        result.rows.append((algorithm_id, h, float(regret.mean()), float(se)))
    return result


@dataclass
class LinearRegretDemo:
    horizons: List[int]
    replicates: int
    # per-horizon mean regret/T for the probabilistic-feedback instance and its twin
    per_round: Dict[int, float] = field(default_factory=dict)
    per_round_se: Dict[int, float] = field(default_factory=dict)
    twin_per_round: Dict[int, float] = field(default_factory=dict)
    twin_per_round_se: Dict[int, float] = field(default_factory=dict)


def linear_regret_demo(
    horizons: List[int],
    master_seed: int,
    replicates: int = 24,
    jobs: int = 1,
) -> LinearRegretDemo:
    horizons = sorted(set(int(h) for h in horizons))
    demo = LinearRegretDemo(horizons=horizons, replicates=replicates)
    for h in horizons:
        for instance, store, store_se in (
            (baseline_instance(h), demo.per_round, demo.per_round_se),
            (certain_feedback_twin(h), demo.twin_per_round, demo.twin_per_round_se),
        ):
            _, _, regret = run_replicates(
                "exp3_standard", instance, master_seed, replicates, None, jobs
            )
            per_round = regret / h
            store[h] = float(per_round.mean())
            store_se[h] = (
                float(per_round.std(ddof=1) / np.sqrt(len(per_round)))
                if len(per_round) > 1
                else 0.0
            )
    return demo
