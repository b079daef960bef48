"""Deterministic-feedback bandit algorithm interface.

An algorithm exposes ``select() -> arm`` and ``feed(arm, loss)``; the feed
must follow its select one-to-one (the transform drivers rely on this, and
the base class asserts it at runtime).  Algorithms that randomize their
selection draw uniforms from a :class:`PolicyStream`, so whole runs stay
reproducible and couplable through the tape set.
"""

from __future__ import annotations

import abc

from ..core.tapes import TapeSet

__all__ = ["BanditAlgorithm", "FeedDisciplineError", "PolicyStream"]

_CHUNK = 1024


class FeedDisciplineError(RuntimeError):
    """select/feed were not alternated one-to-one."""


class PolicyStream:
    """Sequential view over the policy tape for one replicate."""

    def __init__(self, tapes: TapeSet, replicate: int):
        self._tapes = tapes
        self._replicate = replicate
        self._index = 0
        self._buffer = None
        self._buffer_start = 0

    def next(self) -> float:
        offset = self._index - self._buffer_start
        if self._buffer is None or offset >= len(self._buffer):
            self._buffer_start = self._index
            self._buffer = self._tapes.policy_uniforms(self._replicate, self._index, _CHUNK)
            offset = 0
        self._index += 1
        return float(self._buffer[offset])


class BanditAlgorithm(abc.ABC):
    """Base class enforcing the one-feed-per-select discipline."""

    def __init__(self, num_arms: int):
        if num_arms < 1:
            raise ValueError("num_arms must be >= 1")
        self.num_arms = num_arms
        self._pending_arm = None

    def select(self) -> int:
        if self._pending_arm is not None:
            raise FeedDisciplineError("select() called twice without an intervening feed()")
        arm = self._select()
        self._pending_arm = arm
        return arm

    def feed(self, arm: int, loss: float) -> None:
        if self._pending_arm is None:
            raise FeedDisciplineError("feed() called without a preceding select()")
        if arm != self._pending_arm:
            raise FeedDisciplineError(
                f"feed() for arm {arm} but select() returned {self._pending_arm}"
            )
        self._feed(arm, float(loss))
        self._pending_arm = None

    def reset(self, policy_stream: PolicyStream = None) -> None:
        self._pending_arm = None
        self._reset(policy_stream)

    @abc.abstractmethod
    def _select(self) -> int: ...

    @abc.abstractmethod
    def _feed(self, arm: int, loss: float) -> None: ...

    @abc.abstractmethod
    def _reset(self, policy_stream) -> None: ...
