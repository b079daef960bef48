"""Active-arm elimination with phase-doubling confidence radii.

Phase ``s`` collects a fixed number of fed losses per active arm (the quota),
computes per-arm utility means (negated losses), and removes every arm whose
upper confidence bound ``mean + 2^-s`` falls below some other arm's lower
bound ``mean - 2^-s``.  Eliminated arms never rejoin.

The quota is pluggable because the two fused transforms count different
things per phase: the pull-until-feedback fusion counts *observations*
(``floor(8 ln T * 4^s) + 1``, the first count strictly exceeding the loop
threshold), while the size-adjusted-block fusion counts *blocks*
(``ceil(2^(2s+1) ln T)``), each block contributing one fed loss which is 1
when the block produced no observation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .base import BanditAlgorithm

__all__ = [
    "AaeState",
    "aae_phase_quota",
    "aae_block_quota",
    "aae_eliminate",
    "ActiveElimination",
]


def aae_phase_quota(s: int, horizon: float) -> int:
    """Observations collected per active arm in phase ``s`` (while-<= semantics)."""
    if s < 1:
        raise ValueError("phase index must be >= 1")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    return int(math.floor(8.0 * math.log(horizon) * 4.0**s)) + 1


def aae_block_quota(s: int, horizon: float) -> int:
    """Blocks per active arm in phase ``s`` for the size-adjusted-block fusion."""
    if s < 1:
        raise ValueError("phase index must be >= 1")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    return int(math.ceil(2.0 ** (2 * s + 1) * math.log(horizon)))


def aae_eliminate(phase_means: np.ndarray, radius: float, active: List[int]) -> List[int]:
    """Drop every active arm dominated at the current radius; never empties.

    ``phase_means`` are utility means indexed by arm; an arm ``i`` is dropped
    when some active ``j`` has ``mean_j - radius > mean_i + radius``.
    """
    means = np.asarray(phase_means, dtype=float)
    best = max(means[a] for a in active)
    kept = [a for a in active if not (best - radius > means[a] + radius)]
    if not kept:  # unreachable for finite means; keep the guard explicit
        kept = [min(a for a in active if means[a] == best)]
    return kept


@dataclass
class AaeState:
    active: List[int]
    phase: int
    cursor: int  # position within the active list
    feeds_current: int  # feeds received for the arm under the cursor
    quota: int  # feeds required per arm this phase
    loss_sums: np.ndarray = field(repr=False)
    phase_means: np.ndarray = field(repr=False)  # utility means from the last completed phase

    @property
    def radius(self) -> float:
        return 2.0 ** (-self.phase)


class ActiveElimination(BanditAlgorithm):
    def __init__(
        self,
        num_arms: int,
        horizon: int,
        quota_fn: Callable[[int], int] = None,
    ):
        super().__init__(num_arms)
        if horizon < 2:
            raise ValueError("horizon must be >= 2")
        self.horizon = horizon
        self._quota_fn = quota_fn or (lambda s: aae_phase_quota(s, horizon))
        self.state = self._fresh_state()

    def _fresh_state(self) -> AaeState:
        return AaeState(
            active=list(range(self.num_arms)),
            phase=1,
            cursor=0,
            feeds_current=0,
            quota=self._quota_fn(1),
            loss_sums=np.zeros(self.num_arms, dtype=float),
            phase_means=np.full(self.num_arms, np.nan),
        )

    @property
    def active(self) -> List[int]:
        return list(self.state.active)

    @property
    def phase(self) -> int:
        return self.state.phase

    @property
    def feeds_remaining_for_current(self) -> int:
        return self.state.quota - self.state.feeds_current

    def _select(self) -> int:
        return self.state.active[self.state.cursor]

    def _feed(self, arm: int, loss: float) -> None:
        st = self.state
        st.loss_sums[arm] += loss
        st.feeds_current += 1
        if st.feeds_current < st.quota:
            return
        st.cursor += 1
        st.feeds_current = 0
        if st.cursor < len(st.active):
            return
        # Phase complete: compute utility means, eliminate, advance.
        means = np.full(self.num_arms, -np.inf)
        for a in st.active:
            means[a] = -st.loss_sums[a] / st.quota
        st.phase_means = means
        st.active = aae_eliminate(means, st.radius, st.active)
        st.phase += 1
        st.cursor = 0
        st.quota = self._quota_fn(st.phase)
        st.loss_sums = np.zeros(self.num_arms, dtype=float)

    def _reset(self, policy_stream) -> None:
        self.state = self._fresh_state()
