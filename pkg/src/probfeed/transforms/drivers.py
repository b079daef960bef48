"""Full-run drivers that wrap a deterministic-feedback algorithm.

Three wrappers are provided:

* ``run_bb_divide`` -- fixed-size blocks; each block reports one uniformly
  chosen observation (or loss 1 if the block saw none); leftover rounds pull
  uniformly random arms.
* ``run_bb_pull`` -- pulls the chosen arm until feedback arrives and reports
  that observation; the only transform whose block lengths are random.
* ``run_bb_da`` -- like divide but with arm-dependent block sizes that grow
  with the arm's feedback probability (the probabilities must be known).

``run_simulated_bb_pull`` replays the pull transform with pre-drawn
geometric block lengths; it is distributionally identical to the real one
and serves as a statistical test oracle.

When the horizon expires mid-block in the divide-style transforms, the
partial block's pulls count toward the trace but no loss is fed back (the
wrapped round never completes).  The pull transform likewise ends without a
feed if feedback never arrives before the horizon.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..algorithms.base import BanditAlgorithm
from ..core.instance import Instance
from ..core.tapes import PURPOSE_BLOCK_PICK, TapeSet, geometric_from_uniform_array
from ..core.trace import RunTrace, TraceBuilder
from .blocks import bbda_block_size, bbdivide_block_size, validate_f_star
from .env import EnvView

__all__ = [
    "run_bb_divide",
    "run_bb_pull",
    "run_bb_da",
    "run_simulated_bb_pull",
]


def _require_stochastic(instance: Instance, transform: str) -> None:
    if not instance.all_stochastic:
        raise ValueError(f"{transform} requires stochastic losses")


def _block_losses(env: EnvView, arm: int, start: int, count: int):
    """Feedback mask, observation rounds and per-round loss column for a block."""
    x = env.x(arm)[start : start + count]
    obs_rounds = start + np.flatnonzero(x)
    losses = np.full(count, np.nan)
    obs_values = env.losses(arm, obs_rounds)
    losses[obs_rounds - start] = obs_values
    return x, obs_values, losses


def run_bb_divide(
    wrapped: BanditAlgorithm,
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    f_star: float,
) -> RunTrace:
    validate_f_star(f_star, instance.feedback_probs)
    T = instance.horizon
    B = bbdivide_block_size(T, f_star)
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)
    num_blocks = T // B
    picks = tapes.uniforms(PURPOSE_BLOCK_PICK, replicate, 0, 0, num_blocks)
    for phi in range(num_blocks):
        arm = wrapped.select()
        start = phi * B
        x, obs_values, losses = _block_losses(env, arm, start, B)
        builder.append_block(arm, B, x, losses)
        if obs_values.size:
            pick = int(picks[phi] * obs_values.size)
            wrapped.feed(arm, float(obs_values[pick]))
        else:
            wrapped.feed(arm, 1.0)
    # Remaining rounds: pull uniformly random arms.
    start = num_blocks * B
    if start < T:
        u = tapes.driver_uniforms(replicate, start, T - start)
        arms = np.minimum((u * instance.num_arms).astype(int), instance.num_arms - 1)
        for offset, arm in enumerate(arms):
            t = start + offset
            observed = bool(env.x(int(arm))[t])
            loss = env.loss(int(arm), t) if observed else np.nan
            builder.append_round(int(arm), observed, loss)
    return builder.build()


def run_bb_pull(
    wrapped: BanditAlgorithm,
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
) -> RunTrace:
    _require_stochastic(instance, "the pull transform")
    T = instance.horizon
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)
    t = 0
    while t < T:
        arm = wrapped.select()
        if instance.feedback_probs[arm] == 0.0:
            # Legal but hopeless: the run stalls on this arm until the horizon.
            builder.append_constant_block(arm, T - t)
            builder.stalled = True
            break
        pos = env.next_success(arm, t)
        if pos is None or pos >= T:
            builder.append_constant_block(arm, T - t)
            break
        count = pos - t + 1
        x = np.zeros(count, dtype=bool)
        x[-1] = True
        losses = np.full(count, np.nan)
        loss = env.loss(arm, pos)
        losses[-1] = loss
        builder.append_block(arm, count, x, losses)
        wrapped.feed(arm, loss)
        t = pos + 1
    return builder.build()


def run_bb_da(
    wrapped: BanditAlgorithm,
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    f_star: float,
) -> RunTrace:
    _require_stochastic(instance, "the size-adjusted-block transform")
    validate_f_star(f_star, instance.feedback_probs)
    T = instance.horizon
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)
    sizes = [
        bbda_block_size(T, f_star, f_arm) for f_arm in instance.feedback_probs
    ]
    picks = tapes.uniforms(PURPOSE_BLOCK_PICK, replicate, 0, 0, T // min(sizes) + 1)
    t = 0
    phi = 0
    while t < T:
        arm = wrapped.select()
        B = sizes[arm]
        count = min(B, T - t)
        x, obs_values, losses = _block_losses(env, arm, t, count)
        builder.append_block(arm, count, x, losses)
        if count < B:
            break  # partial block: pulls count, but the wrapped round never completes
        if obs_values.size:
            pick = int(picks[phi] * obs_values.size)
            wrapped.feed(arm, float(obs_values[pick]))
        else:
            wrapped.feed(arm, 1.0)
        t += B
        phi += 1
    return builder.build()


def run_simulated_bb_pull(
    wrapped: BanditAlgorithm,
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    feedback_probs: Optional[np.ndarray] = None,
) -> RunTrace:
    """Pull-transform oracle driven by pre-drawn geometric block lengths.

    Block lengths come from a dedicated tape keyed by (arm, wrapped round),
    via the geometric inverse CDF.  ``feedback_probs`` overrides the
    instance's probabilities (used by negative controls in equivalence
    tests).
    """
    _require_stochastic(instance, "the simulated pull transform")
    T = instance.horizon
    probs = instance.feedback_probs if feedback_probs is None else np.asarray(feedback_probs)
    env = EnvView(instance, tapes, replicate)
    builder = TraceBuilder(T)
    # Pre-draw block lengths for every (arm, wrapped-round) pair up front.
    per_arm = []
    for arm in range(instance.num_arms):
        if probs[arm] == 0.0:
            per_arm.append(None)
            continue
        u = tapes.block_geometric_uniforms(replicate, arm, 0, T)
        per_arm.append(geometric_from_uniform_array(u, float(probs[arm])))
    t = 0
    phi = 0
    while t < T:
        arm = wrapped.select()
        if per_arm[arm] is None:
            builder.append_constant_block(arm, T - t)
            builder.stalled = True
            break
        q = int(per_arm[arm][phi])
        if t + q > T:
            builder.append_constant_block(arm, T - t)
            break
        x = np.zeros(q, dtype=bool)
        x[-1] = True
        losses = np.full(q, np.nan)
        loss = env.loss(arm, t + q - 1)
        losses[-1] = loss
        builder.append_block(arm, q, x, losses)
        wrapped.feed(arm, loss)
        t += q
        phi += 1
    return builder.build()
