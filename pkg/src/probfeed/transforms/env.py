"""Replicate-local view of the environment tapes.

Feedback indicators for arm ``i`` are the pointwise thresholds
``u[i, t] < f_i`` over the whole horizon, prefetched once per arm so that
drivers can locate the next observation with a binary search instead of a
per-round loop.  Loss values are materialized only at the rounds that need
them.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..core.instance import Instance, sample_losses
from ..core.tapes import TapeSet

__all__ = ["EnvView"]


class EnvView:
    def __init__(
        self,
        instance: Instance,
        tapes: TapeSet,
        replicate: int,
        feedback_probs: Optional[np.ndarray] = None,
    ):
        self.instance = instance
        self.tapes = tapes
        self.replicate = replicate
        self.feedback_probs = (
            instance.feedback_probs if feedback_probs is None else np.asarray(feedback_probs)
        )
        self._x: dict = {}
        self._success_pos: dict = {}
        self._losses_full: dict = {}

    def x(self, arm: int) -> np.ndarray:
        """Feedback indicators for every round of the horizon."""
        got = self._x.get(arm)
        if got is None:
            u = self.tapes.feedback_uniforms(self.replicate, arm, 0, self.instance.horizon)
            got = u < self.feedback_probs[arm]
            self._x[arm] = got
        return got

    def _successes(self, arm: int) -> np.ndarray:
        pos = self._success_pos.get(arm)
        if pos is None:
            pos = np.flatnonzero(self.x(arm))
            self._success_pos[arm] = pos
        return pos

    def next_success(self, arm: int, start: int) -> Optional[int]:
        """First round >= start where the arm would return feedback, or None."""
        pos = self._successes(arm)
        k = int(np.searchsorted(pos, start))
        return int(pos[k]) if k < len(pos) else None

    def nth_success(self, arm: int, start: int, n: int) -> Optional[int]:
        """Round of the n-th feedback at or after ``start``, or None."""
        pos = self._successes(arm)
        k = int(np.searchsorted(pos, start)) + n - 1
        return int(pos[k]) if k < len(pos) else None

    def losses(self, arm: int, rounds: np.ndarray) -> np.ndarray:
        return self.losses_full(arm)[np.asarray(rounds, dtype=np.int64)]

    def losses_full(self, arm: int) -> np.ndarray:
        """All per-round loss realizations for one arm, cached.

        One tape fetch per (arm, replicate); per-round access then indexes
        the cached array.
        """
        got = self._losses_full.get(arm)
        if got is None:
            got = sample_losses(
                self.instance.loss_models[arm],
                arm,
                np.arange(self.instance.horizon),
                self.tapes,
                self.replicate,
            )
            self._losses_full[arm] = got
        return got

    def loss(self, arm: int, round_index: int) -> float:
        return float(self.losses(arm, np.array([round_index]))[0])
