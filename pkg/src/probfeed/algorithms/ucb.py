"""Upper-confidence-bound algorithm (utility convention).

Losses are fed in; internally the algorithm tracks means of *negated*
losses, so higher is better and the bonus is added.  Ties in the argmax
break toward the smallest arm index, everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import BanditAlgorithm

__all__ = ["UcbState", "ucb_index", "ucb_select", "Ucb"]


@dataclass
class UcbState:
    horizon: int
    pulls: np.ndarray  # feeds received per arm
    mean_utilities: np.ndarray  # running means of negated losses

    @classmethod
    def fresh(cls, num_arms: int, horizon: int) -> "UcbState":
        return cls(
            horizon=horizon,
            pulls=np.zeros(num_arms, dtype=np.int64),
            mean_utilities=np.zeros(num_arms, dtype=float),
        )


def ucb_index(mean_utility: float, pulls: int, horizon: float) -> float:
    """``mean + sqrt(6 ln T / n)``; untried arms are handled by selection."""
    if pulls < 1:
        raise ValueError("ucb_index requires at least one pull")
    return mean_utility + math.sqrt(6.0 * math.log(horizon) / pulls)


def ucb_select(state: UcbState) -> int:
    """Smallest-index untried arm, else argmax of the confidence index."""
    untried = np.flatnonzero(state.pulls == 0)
    if untried.size:
        return int(untried[0])
    indices = state.mean_utilities + np.sqrt(
        6.0 * math.log(state.horizon) / state.pulls
    )
    return int(np.argmax(indices))


class Ucb(BanditAlgorithm):
    def __init__(self, num_arms: int, horizon: int):
        super().__init__(num_arms)
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.horizon = horizon
        self.state = UcbState.fresh(num_arms, horizon)

    def _select(self) -> int:
        return ucb_select(self.state)

    def _feed(self, arm: int, loss: float) -> None:
        n = self.state.pulls[arm]
        self.state.mean_utilities[arm] = (
            n * self.state.mean_utilities[arm] - loss
        ) / (n + 1)
        self.state.pulls[arm] = n + 1

    def _reset(self, policy_stream) -> None:
        self.state = UcbState.fresh(self.num_arms, self.horizon)
