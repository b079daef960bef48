"""Per-round run records and an incremental builder for drivers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RunTrace", "TraceBuilder"]


@dataclass
class RunTrace:
    """One completed (or truncated) run.

    ``losses[t]`` is the realized loss at round ``t`` and is NaN exactly when
    no feedback was observed there; a completed run has ``horizon`` records.
    """

    horizon: int
    arms: np.ndarray
    feedback: np.ndarray
    losses: np.ndarray
    stalled: bool = False  # a zero-feedback arm absorbed the rest of the run

    @property
    def rounds(self) -> int:
        return len(self.arms)

    @property
    def completed(self) -> bool:
        return self.rounds == self.horizon

    def validate(self) -> None:
        if not (len(self.arms) == len(self.feedback) == len(self.losses)):
            raise ValueError("trace columns must have equal length")
        if self.rounds > self.horizon:
            raise ValueError("trace longer than horizon")
        observed = ~np.isnan(self.losses)
        if not np.array_equal(observed, self.feedback.astype(bool)):
            raise ValueError("observed_loss must be present iff feedback was observed")


class TraceBuilder:
    """Accumulates pull segments; drivers append whole blocks at a time."""

    def __init__(self, horizon: int):
        self.horizon = horizon
        self._arms: list = []
        self._feedback: list = []
        self._losses: list = []
        self._rounds = 0
        self.stalled = False

    @property
    def rounds(self) -> int:
        return self._rounds

    @property
    def remaining(self) -> int:
        return self.horizon - self._rounds

    def append_block(self, arm: int, count: int, feedback: np.ndarray, losses: np.ndarray) -> None:
        if count <= 0:
            return
        self._arms.append(np.full(count, arm, dtype=np.int32))
        self._feedback.append(np.asarray(feedback, dtype=bool))
        self._losses.append(np.asarray(losses, dtype=float))
        self._rounds += count

    def append_constant_block(self, arm: int, count: int) -> None:
        """A block with no feedback anywhere (fast path)."""
        if count <= 0:
            return
        self._arms.append(np.full(count, arm, dtype=np.int32))
        self._feedback.append(np.zeros(count, dtype=bool))
        self._losses.append(np.full(count, np.nan))
        self._rounds += count

    def append_rounds(self, arms: np.ndarray, feedback: np.ndarray, losses: np.ndarray) -> None:
        """Append pre-assembled per-round columns (mixed arms allowed)."""
        if len(arms) == 0:
            return
        self._arms.append(np.asarray(arms, dtype=np.int32))
        self._feedback.append(np.asarray(feedback, dtype=bool))
        self._losses.append(np.asarray(losses, dtype=float))
        self._rounds += len(arms)

    def append_round(self, arm: int, observed: bool, loss: float) -> None:
        self._arms.append(np.full(1, arm, dtype=np.int32))
        self._feedback.append(np.array([observed]))
        self._losses.append(np.array([loss if observed else np.nan]))
        self._rounds += 1

    def build(self) -> RunTrace:
        if self._arms:
            trace = RunTrace(
                horizon=self.horizon,
                arms=np.concatenate(self._arms),
                feedback=np.concatenate(self._feedback),
                losses=np.concatenate(self._losses),
                stalled=self.stalled,
            )
        else:
            trace = RunTrace(
                horizon=self.horizon,
                arms=np.empty(0, dtype=np.int32),
                feedback=np.empty(0, dtype=bool),
                losses=np.empty(0, dtype=float),
                stalled=self.stalled,
            )
        return trace
