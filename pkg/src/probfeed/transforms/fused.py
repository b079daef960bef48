"""Fast fused pull-transform runners.

These produce bit-identical traces to ``run_bb_pull`` wrapping the
corresponding policy object (the equivalence is pinned by tests), but skip
the per-observation object protocol: confidence-bound selection runs on
plain floats and elimination phases consume whole observation batches via
binary search, so horizons in the tens of thousands cost milliseconds.
"""

from __future__ import annotations

import math
import numpy as np

from ..algorithms.aae import aae_eliminate, aae_phase_quota
from ..core.instance import Instance
from ..core.tapes import TapeSet
from ..core.trace import RunTrace
from .env import EnvView

__all__ = ["run_bb_pull_ucb_fast", "run_bb_pull_aae_fast"]


def _require_stochastic(instance: Instance) -> None:
    if not instance.all_stochastic:
        raise ValueError("the pull transform requires stochastic losses")


class _TraceSink:
    """Collects (arm, start, end) segments plus observation rounds."""

    def __init__(self, instance: Instance, env: EnvView):
        self.instance = instance
        self.env = env
        self.seg_arm = []
        self.seg_len = []
        self.obs_arm = []
        self.obs_round = []
        self.stalled = False

    def add_segment(self, arm: int, length: int) -> None:
        if length > 0:
            self.seg_arm.append(arm)
            self.seg_len.append(length)

    def add_observation(self, arm: int, round_index: int) -> None:
        self.obs_arm.append(arm)
        self.obs_round.append(np.array([round_index], dtype=np.int64))

    def add_observations(self, arm: int, rounds: np.ndarray) -> None:
        if len(rounds):
            self.obs_arm.append(arm)
            self.obs_round.append(np.asarray(rounds, dtype=np.int64))

    def build(self) -> RunTrace:
        T = self.instance.horizon
        arms = np.repeat(
            np.asarray(self.seg_arm, dtype=np.int32), np.asarray(self.seg_len, dtype=np.int64)
        )
        feedback = np.zeros(len(arms), dtype=bool)
        losses = np.full(len(arms), np.nan)
        for arm, rounds in zip(self.obs_arm, self.obs_round):
            feedback[rounds] = True
            losses[rounds] = self.env.losses_full(arm)[rounds]
        return RunTrace(
            horizon=T, arms=arms, feedback=feedback, losses=losses, stalled=self.stalled
        )


def run_bb_pull_ucb_fast(
    instance: Instance, tapes: TapeSet, replicate: int
) -> RunTrace:
    """Pull transform fused with the confidence-bound algorithm."""
    _require_stochastic(instance)
    T = instance.horizon
    K = instance.num_arms
    env = EnvView(instance, tapes, replicate)
    sink = _TraceSink(instance, env)
    probs = instance.feedback_probs

    success_pos = [np.flatnonzero(env.x(a)).tolist() for a in range(K)]
    n_pos = [len(p) for p in success_pos]
    cursor = [0] * K
    loss_cache = [env.losses_full(a) for a in range(K)]
    # Bonus for n pulls, computed exactly as the policy object does.
    bonus = (np.sqrt(6.0 * math.log(T) / np.arange(1, T + 2))).tolist()
    pulls = [0] * K
    means = [0.0] * K
    obs_by_arm = [[] for _ in range(K)]

    t = 0
    while t < T:
        arm = -1
        for i in range(K):  # smallest-index untried arm first
            if pulls[i] == 0:
                arm = i
                break
        if arm < 0:
            best = -math.inf
            for i in range(K):
                v = means[i] + bonus[pulls[i] - 1]
                if v > best:
                    best = v
                    arm = i
        if probs[arm] == 0.0:
            sink.add_segment(arm, T - t)
            sink.stalled = True
            break
        pos = success_pos[arm]
        c = cursor[arm]
        while c < n_pos[arm] and pos[c] < t:
            c += 1
        cursor[arm] = c
        if c >= n_pos[arm]:
            sink.add_segment(arm, T - t)
            break
        end = pos[c]
        cursor[arm] = c + 1
        sink.add_segment(arm, end - t + 1)
        obs_by_arm[arm].append(end)
        loss = float(loss_cache[arm][end])
        n = pulls[arm]
        means[arm] = (n * means[arm] - loss) / (n + 1)
        pulls[arm] = n + 1
        t = end + 1
    for arm in range(K):
        sink.add_observations(arm, np.asarray(obs_by_arm[arm], dtype=np.int64))
    return sink.build()


def run_bb_pull_aae_fast(
    instance: Instance, tapes: TapeSet, replicate: int
) -> RunTrace:
    """Pull transform fused with active-arm elimination.

    Each (phase, arm) service consumes the arm's next ``quota`` observations
    in one batch; the horizon can expire mid-service, in which case no
    elimination happens and the run just fills out.
    """
    _require_stochastic(instance)
    T = instance.horizon
    K = instance.num_arms
    env = EnvView(instance, tapes, replicate)
    sink = _TraceSink(instance, env)
    probs = instance.feedback_probs

    success_pos = [np.flatnonzero(env.x(a)) for a in range(K)]
    cursor = [0] * K

    active = list(range(K))
    s = 1
    t = 0
    while t < T:
        quota = aae_phase_quota(s, T)
        means = np.full(K, -np.inf)
        truncated = False
        for arm in active:
            if t >= T:
                truncated = True
                break
            if probs[arm] == 0.0:
                sink.add_segment(arm, T - t)
                sink.stalled = True
                t = T
                truncated = True
                break
            pos = success_pos[arm]
            c = cursor[arm]
            while c < len(pos) and pos[c] < t:
                c += 1
            if c + quota - 1 >= len(pos) or pos[c + quota - 1] >= T:
                # Horizon expires during this arm's service.
                avail = pos[c:]
                sink.add_segment(arm, T - t)
                sink.add_observations(arm, avail[avail < T])
                cursor[arm] = len(pos)
                t = T
                truncated = True
                break
            end = int(pos[c + quota - 1])
            obs_rounds = pos[c : c + quota]
            sink.add_segment(arm, end - t + 1)
            sink.add_observations(arm, obs_rounds)
            # Sequential left-to-right sum: matches the policy object's
            # streaming accumulation bit-for-bit.
            means[arm] = -sum(env.losses_full(arm)[obs_rounds].tolist()) / quota
            cursor[arm] = c + quota
            t = end + 1
        if truncated:
            break
        active = aae_eliminate(means, 2.0 ** (-s), active)
        s += 1
    return sink.build()
