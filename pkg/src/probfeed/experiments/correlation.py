"""Cross-arm correlation study on randomly generated instances.

Each instance draws per-arm raw utility means uniformly from an
algorithm-specific range (0-1 for the pull/confidence-bound runner, 0-5 for
the elimination runner, losses -1-0 for exponential weights) and per-arm
feedback rates uniformly from (0, 1].  All three raw conventions rescale to
the same canonical form: loss means uniform in [0, 1] with Gaussian noise of
sd 0.1 clipped to [0, 1], so one canonical instance per id serves every
algorithm and the raw ranges are recorded as metadata only.

Each algorithm runs once per instance; the Pearson correlation between the
feedback rates and per-arm pull / observation counts is reported per
instance, then summarized as mean/min/max across instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..core.instance import GaussianLoss, Instance, InstanceSpec, make_instance
from ..core.tapes import TapeSet
from ..metrics import compute_apc_foc, pearson
from ..transforms import run_algorithm

__all__ = ["GeneratorSpec", "CorrelationResult", "generate_instance", "correlation_study"]

_MIN_RATE = 1e-9  # a literal zero rate is invalid for the simplified 3-phase runner


def _safe_pearson(x, y) -> float:
    try:
        return pearson(x, y)
    except ValueError:
        return float("nan")

RAW_RANGES = {
    "bbpull_ucb": {"kind": "utility", "low": 0.0, "high": 1.0, "noise_sd": 0.1},
    "bbpull_aae": {"kind": "utility", "low": 0.0, "high": 5.0, "noise_sd": 0.5},
    "three_phase_exp3_simplified": {"kind": "loss", "low": -1.0, "high": 0.0, "noise_sd": 0.1},
}


@dataclass(frozen=True)
class GeneratorSpec:
    num_arms: int = 100
    horizon: int = 1000
    noise_sd: float = 0.1  # canonical scale (0.5 on the 0-5 raw range)

    def to_dict(self) -> dict:
        return {
            "num_arms": self.num_arms,
            "horizon": self.horizon,
            "noise_sd": self.noise_sd,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(
            num_arms=int(d.get("num_arms", 100)),
            horizon=int(d.get("horizon", 1000)),
            noise_sd=float(d.get("noise_sd", 0.1)),
        )


def generate_instance(spec: GeneratorSpec, tapes: TapeSet, instance_id: int) -> Instance:
    """Canonical random instance: loss means ~ U[0,1], rates ~ U[0,1]."""
    utilities = tapes.generator_uniforms(instance_id, 0, spec.num_arms)
    rates = np.maximum(tapes.generator_uniforms(instance_id, 1, spec.num_arms), _MIN_RATE)
    means = 1.0 - utilities
    models = tuple(GaussianLoss(mean=float(m), stddev=spec.noise_sd) for m in means)
    return make_instance(
        InstanceSpec(
            num_arms=spec.num_arms,
            horizon=spec.horizon,
            feedback_probs=tuple(float(f) for f in rates),
            loss_models=models,
        )
    )


@dataclass
class CorrelationResult:
    generator: GeneratorSpec
    algorithms: List[str]
    num_instances: int
    # rows: (algorithm, instance_id, pearson_apc, pearson_foc)
    rows: List[tuple] = field(default_factory=list)
    # arm_rows: (algorithm, instance_id, arm, f, apc, foc, utility)
    arm_rows: List[tuple] = field(default_factory=list)

    def summary(self) -> Dict[str, dict]:
        """Mean/min/max per algorithm, skipping undefined (NaN) correlations.

        A correlation is undefined when a count column has zero variance
        across arms (e.g. no feedback observed anywhere); such instances are
        counted separately rather than crashing the study.
        """
        out = {}
        for alg in self.algorithms:
            pa = np.array([r[2] for r in self.rows if r[0] == alg])
            pf = np.array([r[3] for r in self.rows if r[0] == alg])
            degenerate = int(np.isnan(pa).sum() + np.isnan(pf).sum())
            with np.errstate(all="ignore"):
                out[alg] = {
                    "apc_mean": float(np.nanmean(pa)),
                    "apc_min": float(np.nanmin(pa)),
                    "apc_max": float(np.nanmax(pa)),
                    "foc_mean": float(np.nanmean(pf)),
                    "foc_min": float(np.nanmin(pf)),
                    "foc_max": float(np.nanmax(pf)),
                    "undefined": degenerate,
                }
        return out


def correlation_study(
    generator: GeneratorSpec,
    num_instances: int,
    algorithms: List[str],
    master_seed: int,
    params: Optional[dict] = None,
    keep_arm_rows: bool = True,
) -> CorrelationResult:
    params = params or {}
    tapes = TapeSet(master_seed)
    result = CorrelationResult(
        generator=generator, algorithms=list(algorithms), num_instances=num_instances
    )
    for instance_id in range(num_instances):
        instance = generate_instance(generator, tapes, instance_id)
        f = instance.feedback_probs
        utility = 1.0 - instance.mean_losses
        for alg in algorithms:
            trace = run_algorithm(alg, instance, tapes, instance_id, params.get(alg))
            apc, foc = compute_apc_foc(trace, instance.num_arms)
            result.rows.append(
                (alg, instance_id, _safe_pearson(f, apc), _safe_pearson(f, foc))
            )
            if keep_arm_rows:
                for arm in range(instance.num_arms):
                    result.arm_rows.append(
                        (
                            alg,
                            instance_id,
                            arm,
                            float(f[arm]),
                            float(apc[arm]),
                            float(foc[arm]),
                            float(utility[arm]),
                        )
                    )
    return result
