"""Three-phase exponential weights for probabilistic feedback.

Phase 1 pulls each arm until it returns feedback ``N = ceil(8 ln(TK))``
times and records the average number of rounds per observation; phase 2
pulls each arm until one more observation and records the exact round count.
Phase 3 runs exponential weights with the importance-weighted estimator
``loss * X / pi * P^E`` and learning rate ``sqrt(ln K / (T * sum_i P^LR_i))``.

The simplified variant skips estimation: both per-arm quantities are set to
``1 / f_i`` and phase 3 starts at round one.  A third runner implements the
uncorrected baseline: reward-form exponential weights whose estimator treats
an unobserved round as zero utility, exactly the behavior that loses
linearly when feedback rates differ across arms.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algorithms.exp3 import exp3_learning_rate
from ..core.instance import Instance
from ..core.tapes import TapeSet
from ..core.trace import RunTrace, TraceBuilder
from .env import EnvView

__all__ = [
    "ThreePhaseState",
    "exp3_loss_estimator",
    "run_three_phase_exp3",
    "run_standard_exp3",
]

_LOG_FLOOR = -700.0


@dataclass
class ThreePhaseState:
    """Estimation products carried into phase 3."""

    rounds_per_obs: np.ndarray  # P^LR: mean rounds per observation, per arm
    rounds_one_obs: np.ndarray  # P^E: rounds for a single observation, per arm
    phase3_start: int  # first phase-3 round (0-based)
    learning_rate: float


def exp3_loss_estimator(loss: float, observed: int, pi: float, p_e: float) -> float:
    """Importance-weighted loss estimate for the pulled arm; 0 when unobserved."""
    if not 0.0 < pi <= 1.0:
        raise ValueError(f"selection probability must lie in (0, 1], got {pi}")
    if p_e < 1.0:
        raise ValueError(f"rounds-per-observation estimate must be >= 1, got {p_e}")
    if observed not in (0, 1):
        raise ValueError("observed must be 0 or 1")
    return loss * observed / pi * p_e


class _SimplexWeights:
    """Log-space exponential weights over plain floats (hot inner loop).

    Matches the semantics of :func:`probfeed.algorithms.exp3_update`: the
    weights are shifted by their maximum after every update (an exact
    renormalization) and floored so the sampling probabilities stay positive.
    """

    __slots__ = ("eta", "log_w", "pi", "cum")

    def __init__(self, num_arms: int, eta: float):
        self.eta = eta
        self.log_w = [0.0] * num_arms
        self.pi = [1.0 / num_arms] * num_arms
        self.cum = list(np.cumsum(self.pi))

    def sample(self, u: float) -> int:
        return min(bisect_right(self.cum, u), len(self.pi) - 1)

    def apply_loss(self, arm: int, estimated_loss: float) -> None:
        log_w = self.log_w
        log_w[arm] -= self.eta * estimated_loss
        m = max(log_w)
        ws = [math.exp(v - m) if v - m > _LOG_FLOOR else math.exp(_LOG_FLOOR) for v in log_w]
        total = math.fsum(ws)
        self.log_w = [v - m for v in log_w]
        pi = [w / total for w in ws]
        self.pi = pi
        acc = 0.0
        cum = []
        for p in pi:
            acc += p
            cum.append(acc)
        self.cum = cum

    def apply_gain(self, arm: int, estimated_gain: float) -> None:
        self.apply_loss(arm, -estimated_gain)


def _fill_tail(builder: TraceBuilder, env: EnvView, arm: int, start: int) -> None:
    """Pull one arm for every remaining round (phase 1/2 ran out of time)."""
    T = builder.horizon
    count = T - start
    if count <= 0:
        return
    x = env.x(arm)[start:T]
    losses = np.full(count, np.nan)
    obs = start + np.flatnonzero(x)
    losses[obs - start] = env.losses(arm, obs)
    builder.append_block(arm, count, x, losses)


def run_three_phase_exp3(
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    simplified: bool = False,
    state_out: Optional[list] = None,
) -> RunTrace:
    """Full run; ``state_out``, if given, receives the ThreePhaseState
    (or None when the horizon expired during estimation)."""
    T = instance.horizon
    K = instance.num_arms
    probs = instance.feedback_probs
    if np.any(probs <= 0.0):
        raise ValueError("three-phase exponential weights requires f_i > 0 for every arm")
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)

    if simplified:
        state = ThreePhaseState(
            rounds_per_obs=1.0 / probs,
            rounds_one_obs=1.0 / probs,
            phase3_start=0,
            learning_rate=exp3_learning_rate(K, T, float(np.sum(1.0 / probs))),
        )
    else:
        n_obs = math.ceil(8.0 * math.log(T * K))
        p_lr = np.zeros(K)
        p_e = np.zeros(K)
        t = 0
        for arm in range(K):
            pos = env.nth_success(arm, t, n_obs)
            if pos is None or pos >= T:
                _fill_tail(builder, env, arm, t)
                if state_out is not None:
                    state_out.append(None)
                return builder.build()
            p_lr[arm] = (pos - t + 1) / n_obs
            _fill_tail_block(builder, env, arm, t, pos)
            t = pos + 1
        for arm in range(K):
            pos = env.next_success(arm, t)
            if pos is None or pos >= T:
                _fill_tail(builder, env, arm, t)
                if state_out is not None:
                    state_out.append(None)
                return builder.build()
            p_e[arm] = pos - t + 1
            _fill_tail_block(builder, env, arm, t, pos)
            t = pos + 1
        state = ThreePhaseState(
            rounds_per_obs=p_lr,
            rounds_one_obs=p_e,
            phase3_start=t,
            learning_rate=exp3_learning_rate(K, T, float(np.sum(p_lr))),
        )

    if state_out is not None:
        state_out.append(state)
    _run_phase3(builder, env, tapes, replicate, state)
    return builder.build()


def _fill_tail_block(builder, env, arm, start, end) -> None:
    """Record rounds ``start..end`` of a single-arm estimation block."""
    count = end - start + 1
    x = env.x(arm)[start : end + 1]
    losses = np.full(count, np.nan)
    obs = start + np.flatnonzero(x)
    losses[obs - start] = env.losses(arm, obs)
    builder.append_block(arm, count, x, losses)


def _run_phase3(builder, env, tapes, replicate, state: ThreePhaseState) -> None:
    T = builder.horizon
    t0 = state.phase3_start
    if t0 >= T:
        return
    K = env.instance.num_arms
    eta = state.learning_rate
    p_e = [float(v) for v in state.rounds_one_obs]
    count = T - t0
    policy_u = tapes.policy_uniforms(replicate, t0, count)
    x_all = [env.x(a) for a in range(K)]
    loss_all = [env.losses_full(a) for a in range(K)]

    weights = _SimplexWeights(K, eta)
    arms = np.empty(count, dtype=np.int32)
    feedback = np.empty(count, dtype=bool)
    losses = np.full(count, np.nan)

    for j in range(count):
        t = t0 + j
        arm = weights.sample(policy_u[j])
        arms[j] = arm
        observed = bool(x_all[arm][t])
        feedback[j] = observed
        if observed:
            loss = float(loss_all[arm][t])
            losses[j] = loss
            lhat = loss / weights.pi[arm] * p_e[arm]
            weights.apply_loss(arm, lhat)
    builder.append_rounds(arms, feedback, losses)


def run_standard_exp3(
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    exploration: Optional[float] = None,
) -> RunTrace:
    """Uncorrected exponential weights (reward form, uniform exploration mix).

    The textbook tuning: ``gamma = min(1, sqrt(K ln K / ((e-1) T)))``,
    sampling probabilities ``(1-gamma) w_i / W + gamma / K``, and estimator
    ``(1 - loss) * X / p`` for the pulled arm.  The exploration floor keeps
    the per-step exponent bounded by 1.  Nothing corrects for probabilistic
    feedback: an unobserved round contributes zero estimated reward, so arms
    that rarely return feedback look worse than they are.
    """
    T = instance.horizon
    K = instance.num_arms
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)
    gamma = (
        exploration
        if exploration is not None
        else min(1.0, math.sqrt(K * math.log(K) / ((math.e - 1.0) * T)))
    )
    if not 0.0 < gamma <= 1.0:
        raise ValueError("exploration rate must lie in (0, 1]")
    eta = gamma / K

    policy_u = tapes.policy_uniforms(replicate, 0, T)
    x_all = [env.x(a) for a in range(K)]
    loss_all = [env.losses_full(a) for a in range(K)]

    weights = _SimplexWeights(K, eta)
    floor = gamma / K
    scale = 1.0 - gamma
    arms = np.empty(T, dtype=np.int32)
    feedback = np.empty(T, dtype=bool)
    losses = np.full(T, np.nan)

    probs = [scale * p + floor for p in weights.pi]
    cum = list(np.cumsum(probs))
    for t in range(T):
        arm = min(bisect_right(cum, policy_u[t]), K - 1)
        arms[t] = arm
        observed = bool(x_all[arm][t])
        feedback[t] = observed
        if observed:
            loss = float(loss_all[arm][t])
            losses[t] = loss
            weights.apply_gain(arm, (1.0 - loss) / probs[arm])
            probs = [scale * p + floor for p in weights.pi]
            acc = 0.0
            cum = []
            for p in probs:
                acc += p
                cum.append(acc)
    builder.append_rounds(arms, feedback, losses)
    return builder.build()
