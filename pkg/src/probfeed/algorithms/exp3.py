"""Exponential-weights algorithm for bandit feedback.

Weights are kept in log space and shifted by their maximum after every
update, which is an exact renormalization (the sampling distribution is
unchanged) and prevents overflow: importance-weighted loss estimates scale
like ``1 / (pi * f)`` and would overflow plain ``exp`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base import BanditAlgorithm, PolicyStream

__all__ = ["Exp3State", "exp3_update", "exp3_learning_rate", "sample_from_simplex", "Exp3"]

_TINY_LOG = -700.0  # below this a weight underflows; clamp keeps pi > 0


def exp3_learning_rate(num_arms: int, horizon: int, rounds_per_obs_sum: float) -> float:
    """``sqrt(ln K / (T * sum_i P_i))`` where ``P_i`` estimates rounds per observation.

    With deterministic feedback every ``P_i`` is 1 and this reduces to the
    usual ``sqrt(ln K / (T K))`` tuning.
    """
    if num_arms < 2:
        raise ValueError("need at least two arms")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if rounds_per_obs_sum < num_arms:
        raise ValueError("sum of per-arm rounds-per-observation must be >= K")
    return math.sqrt(math.log(num_arms) / (horizon * rounds_per_obs_sum))


@dataclass
class Exp3State:
    learning_rate: float
    log_weights: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)

    @classmethod
    def fresh(cls, num_arms: int, learning_rate: float) -> "Exp3State":
        if learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        return cls(
            learning_rate=learning_rate,
            log_weights=np.zeros(num_arms, dtype=float),
            probs=np.full(num_arms, 1.0 / num_arms),
        )


def exp3_update(state: Exp3State, arm: int, estimated_loss: float) -> Exp3State:
    """Multiply the pulled arm's weight by ``exp(-eta * loss_hat)`` and renormalize."""
    if not math.isfinite(estimated_loss):
        raise ValueError("estimated loss must be finite")
    state.log_weights[arm] -= state.learning_rate * estimated_loss
    state.log_weights -= state.log_weights.max()
    np.maximum(state.log_weights, _TINY_LOG, out=state.log_weights)
    w = np.exp(state.log_weights)
    state.probs = w / w.sum()
    return state


def sample_from_simplex(probs: np.ndarray, u: float) -> int:
    """Inverse-CDF draw from a probability vector using one uniform."""
    idx = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    return min(idx, len(probs) - 1)


class Exp3(BanditAlgorithm):
    """Bandit exponential weights under deterministic feedback.

    Feeds one realized loss per select; the importance-weighted estimate
    ``loss / pi`` is applied to the pulled arm only.
    """

    def __init__(
        self,
        num_arms: int,
        horizon: int,
        policy_stream: PolicyStream,
        learning_rate: float = None,
    ):
        super().__init__(num_arms)
        self.horizon = horizon
        self._stream = policy_stream
        self._eta = (
            learning_rate
            if learning_rate is not None
            else exp3_learning_rate(num_arms, horizon, float(num_arms))
        )
        self.state = Exp3State.fresh(num_arms, self._eta)
        self._last_prob = None

    def _select(self) -> int:
        arm = sample_from_simplex(self.state.probs, self._stream.next())
        self._last_prob = float(self.state.probs[arm])
        return arm

    def _feed(self, arm: int, loss: float) -> None:
        exp3_update(self.state, arm, loss / self._last_prob)

    def _reset(self, policy_stream) -> None:
        if policy_stream is not None:
            self._stream = policy_stream
        self.state = Exp3State.fresh(self.num_arms, self._eta)
        self._last_prob = None
