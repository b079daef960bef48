"""Problem instances: arms, feedback probabilities, and loss models.

The canonical convention throughout the library is that losses live in
[0, 1] (draws outside the clip bounds are clipped, not resampled).
Utility-style generators convert to this convention before anything runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy.special import ndtr, ndtri

from .tapes import TapeSet

__all__ = [
    "ConstantLoss",
    "GaussianLoss",
    "AdversarialLoss",
    "LossModel",
    "InstanceSpec",
    "Instance",
    "make_instance",
    "sample_loss",
    "instance_spec_from_dict",
    "instance_spec_to_dict",
    "load_instance_spec",
]


@dataclass(frozen=True)
class ConstantLoss:
    value: float

    def validate(self, horizon: int) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"constant loss must lie in [0, 1], got {self.value}")

    def mean_loss(self) -> float:
        return self.value

    @property
    def is_stochastic(self) -> bool:
        return True


@dataclass(frozen=True)
class GaussianLoss:
    mean: float
    stddev: float
    clip_low: float = 0.0
    clip_high: float = 1.0

    def validate(self, horizon: int) -> None:
        if self.stddev < 0:
            raise ValueError("stddev must be non-negative")
        if not 0.0 <= self.clip_low < self.clip_high <= 1.0:
            raise ValueError("clip bounds must satisfy 0 <= low < high <= 1")

    def mean_loss(self) -> float:
        """Exact mean of the clipped draw (clipping shifts the raw mean)."""
        if self.stddev == 0:
            return min(max(self.mean, self.clip_low), self.clip_high)
        a = (self.clip_low - self.mean) / self.stddev
        b = (self.clip_high - self.mean) / self.stddev
        phi = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
        return (
            self.clip_low * ndtr(a)
            + self.clip_high * (1.0 - ndtr(b))
            + self.mean * (ndtr(b) - ndtr(a))
            - self.stddev * (phi(b) - phi(a))
        )

    @property
    def is_stochastic(self) -> bool:
        return True


@dataclass(frozen=True)
class AdversarialLoss:
    """Oblivious per-round loss tape, fixed before the run."""

    tape: tuple

    def validate(self, horizon: int) -> None:
        if len(self.tape) != horizon:
            raise ValueError(
                f"adversarial tape length {len(self.tape)} != horizon {horizon}"
            )
        arr = np.asarray(self.tape, dtype=float)
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("adversarial tape entries must lie in [0, 1]")

    def mean_loss(self) -> float:
        return float(np.mean(self.tape))

    @property
    def is_stochastic(self) -> bool:
        return False


LossModel = Union[ConstantLoss, GaussianLoss, AdversarialLoss]


@dataclass(frozen=True)
class InstanceSpec:
    num_arms: int
    horizon: int
    feedback_probs: tuple
    loss_models: tuple

    def validate(self) -> None:
        if self.num_arms < 1:
            raise ValueError("num_arms must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if len(self.feedback_probs) != self.num_arms:
            raise ValueError("feedback_probs length must equal num_arms")
        if len(self.loss_models) != self.num_arms:
            raise ValueError("loss_models length must equal num_arms")
        for f in self.feedback_probs:
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"feedback probability {f} outside [0, 1]")
        for model in self.loss_models:
            model.validate(self.horizon)


@dataclass(frozen=True)
class Instance:
    """Validated instance with derived quantities used by metrics."""

    spec: InstanceSpec
    mean_losses: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)

    @property
    def num_arms(self) -> int:
        return self.spec.num_arms

    @property
    def horizon(self) -> int:
        return self.spec.horizon

    @property
    def feedback_probs(self) -> np.ndarray:
        return np.asarray(self.spec.feedback_probs, dtype=float)

    @property
    def loss_models(self) -> tuple:
        return self.spec.loss_models

    @property
    def all_stochastic(self) -> bool:
        return all(m.is_stochastic for m in self.spec.loss_models)

    def with_feedback_prob(self, arm: int, f: float) -> "Instance":
        """The paired instance: identical except for one arm's feedback rate."""
        probs = list(self.spec.feedback_probs)
        probs[arm] = f
        return make_instance(
            InstanceSpec(
                num_arms=self.spec.num_arms,
                horizon=self.spec.horizon,
                feedback_probs=tuple(probs),
                loss_models=self.spec.loss_models,
            )
        )


def make_instance(spec: InstanceSpec) -> Instance:
    spec.validate()
    means = np.array([m.mean_loss() for m in spec.loss_models], dtype=float)
    gaps = means - means.min()
    return Instance(spec=spec, mean_losses=means, gaps=gaps)


def sample_loss(
    model: LossModel, arm: int, round_index: int, tapes: TapeSet, replicate: int
) -> float:
    """Realized loss of ``arm`` at a (0-based) round, deterministic given tapes."""
    if isinstance(model, ConstantLoss):
        return model.value
    if isinstance(model, AdversarialLoss):
        return float(model.tape[round_index])
    u = tapes.loss_uniform(replicate, arm, round_index)
    z = float(ndtri(u)) if 0.0 < u < 1.0 else (-np.inf if u == 0.0 else np.inf)
    return float(min(max(model.mean + model.stddev * z, model.clip_low), model.clip_high))


def sample_losses(
    model: LossModel, arm: int, rounds: np.ndarray, tapes: TapeSet, replicate: int
) -> np.ndarray:
    """Vectorized :func:`sample_loss` over an array of round indices."""
    rounds = np.asarray(rounds, dtype=np.int64)
    if isinstance(model, ConstantLoss):
        return np.full(rounds.shape, model.value)
    if isinstance(model, AdversarialLoss):
        return np.asarray(model.tape, dtype=float)[rounds]
    if rounds.size == 0:
        return np.empty(0)
    lo, hi = int(rounds.min()), int(rounds.max())
    u = tapes.loss_uniforms(replicate, arm, lo, hi - lo + 1)[rounds - lo]
    with np.errstate(divide="ignore"):
        z = ndtri(u)
    return np.clip(model.mean + model.stddev * z, model.clip_low, model.clip_high)


# Serialization (instance specs are loadable from JSON config files).

def _loss_model_to_dict(model: LossModel) -> dict:
    if isinstance(model, ConstantLoss):
        return {"kind": "constant", "value": model.value}
    if isinstance(model, GaussianLoss):
        return {
            "kind": "gaussian",
            "mean": model.mean,
            "stddev": model.stddev,
            "clip_low": model.clip_low,
            "clip_high": model.clip_high,
        }
    return {"kind": "adversarial", "tape": list(model.tape)}


def _loss_model_from_dict(d: dict) -> LossModel:
    kind = d.get("kind")
    if kind == "constant":
        return ConstantLoss(value=float(d["value"]))
    if kind == "gaussian":
        return GaussianLoss(
            mean=float(d["mean"]),
            stddev=float(d["stddev"]),
            clip_low=float(d.get("clip_low", 0.0)),
            clip_high=float(d.get("clip_high", 1.0)),
        )
    if kind == "adversarial":
        return AdversarialLoss(tape=tuple(float(x) for x in d["tape"]))
    raise ValueError(f"unknown loss model kind: {kind!r}")


def instance_spec_to_dict(spec: InstanceSpec) -> dict:
    return {
        "arms": spec.num_arms,
        "horizon": spec.horizon,
        "feedback_probs": list(spec.feedback_probs),
        "loss_models": [_loss_model_to_dict(m) for m in spec.loss_models],
    }


def instance_spec_from_dict(d: dict) -> InstanceSpec:
    return InstanceSpec(
        num_arms=int(d["arms"]),
        horizon=int(d["horizon"]),
        feedback_probs=tuple(float(x) for x in d["feedback_probs"]),
        loss_models=tuple(_loss_model_from_dict(m) for m in d["loss_models"]),
    )


def load_instance_spec(path: Union[str, Path]) -> tuple:
    """Load ``(InstanceSpec, seed)`` from a JSON config file."""
    with open(path) as fh:
        data = json.load(fh)
    spec = instance_spec_from_dict(data)
    spec.validate()
    return spec, int(data.get("seed", 0))
