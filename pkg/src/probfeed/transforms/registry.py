"""Stable string identifiers mapping to full-run algorithm drivers.

The identifiers appear verbatim in CSV output and experiment configs.
Wrapped algorithms are tuned with the instance horizon (their confidence
bonuses and learning rates use ``ln T`` of the pull horizon, matching the
fused variants, so e.g. ``bbpull_ucb`` with all-certain feedback is
round-for-round identical to plain UCB).
"""

from __future__ import annotations

from typing import Dict, Optional

import numpy as np

from ..algorithms import ActiveElimination, Exp3, PolicyStream, Ucb, aae_block_quota
from ..core.instance import Instance
from ..core.tapes import TapeSet
from ..core.trace import RunTrace
from .blocks import validate_f_star
from .drivers import run_bb_da, run_bb_divide, run_bb_pull, run_simulated_bb_pull
from .fused import run_bb_pull_aae_fast, run_bb_pull_ucb_fast
from .three_phase import run_standard_exp3, run_three_phase_exp3

__all__ = ["ALGORITHM_IDS", "ORACLE_IDS", "run_algorithm", "validate_algorithm"]


def _ucb(instance: Instance, tapes, replicate) -> Ucb:
    return Ucb(instance.num_arms, instance.horizon)


def _aae(instance: Instance, tapes, replicate) -> ActiveElimination:
    return ActiveElimination(instance.num_arms, instance.horizon)


def _aae_block_counted(instance: Instance, tapes, replicate) -> ActiveElimination:
    T = instance.horizon
    return ActiveElimination(
        instance.num_arms, T, quota_fn=lambda s: aae_block_quota(s, T)
    )


def _exp3(instance: Instance, tapes: TapeSet, replicate: int) -> Exp3:
    return Exp3(instance.num_arms, instance.horizon, PolicyStream(tapes, replicate))


_WRAPPED = {"ucb": _ucb, "aae": _aae, "exp3": _exp3}

# id -> (family, wrapped factory or None)
_SPECS: Dict[str, tuple] = {
    "bbdivide_ucb": ("divide", _ucb),
    "bbdivide_aae": ("divide", _aae),
    "bbdivide_exp3": ("divide", _exp3),
    "bbpull_ucb": ("pull_ucb_fast", None),
    "bbpull_aae": ("pull_aae_fast", None),
    "bbpull_exp3": ("pull", _exp3),
    "bbda_ucb": ("da", _ucb),
    "bbda_aae": ("da", _aae_block_counted),
    "three_phase_exp3": ("three_phase_full", None),
    "three_phase_exp3_simplified": ("three_phase_simplified", None),
    "exp3_standard": ("exp3_standard", None),
    "simulated_bbpull_ucb": ("simulated_pull", _ucb),
    "simulated_bbpull_aae": ("simulated_pull", _aae),
}

ALGORITHM_IDS = [i for i in _SPECS if not i.startswith("simulated_")]
ORACLE_IDS = [i for i in _SPECS if i.startswith("simulated_")]


def validate_algorithm(algorithm_id: str, instance: Instance, params: Optional[dict] = None) -> None:
    """Reject incompatible algorithm/instance combinations up front."""
    params = params or {}
    if algorithm_id not in _SPECS:
        raise ValueError(f"unknown algorithm id: {algorithm_id!r}")
    family, _ = _SPECS[algorithm_id]
    if family in ("divide", "da"):
        if "f_star" not in params:
            raise ValueError(f"{algorithm_id} requires the f_star parameter")
        validate_f_star(float(params["f_star"]), instance.feedback_probs)
    if family in (
        "pull", "pull_ucb_fast", "pull_aae_fast", "da", "simulated_pull"
    ) and not instance.all_stochastic:
        raise ValueError(f"{algorithm_id} requires stochastic losses")
    if family in ("three_phase_full", "three_phase_simplified") and np.any(
        instance.feedback_probs <= 0.0
    ):
        raise ValueError(f"{algorithm_id} requires every feedback probability > 0")


def run_algorithm(
    algorithm_id: str,
    instance: Instance,
    tapes: TapeSet,
    replicate: int,
    params: Optional[dict] = None,
) -> RunTrace:
    params = params or {}
    validate_algorithm(algorithm_id, instance, params)
    family, factory = _SPECS[algorithm_id]
    if family == "divide":
        wrapped = factory(instance, tapes, replicate)
        return run_bb_divide(wrapped, instance, tapes, replicate, float(params["f_star"]))
    if family == "pull":
        wrapped = factory(instance, tapes, replicate)
        return run_bb_pull(wrapped, instance, tapes, replicate)
    if family == "pull_ucb_fast":
        return run_bb_pull_ucb_fast(instance, tapes, replicate)
    if family == "pull_aae_fast":
        return run_bb_pull_aae_fast(instance, tapes, replicate)
    if family == "da":
        wrapped = factory(instance, tapes, replicate)
        return run_bb_da(wrapped, instance, tapes, replicate, float(params["f_star"]))
    if family == "simulated_pull":
        wrapped = factory(instance, tapes, replicate)
        override = params.get("feedback_probs_override")
        return run_simulated_bb_pull(
            wrapped, instance, tapes, replicate,
            feedback_probs=None if override is None else np.asarray(override, dtype=float),
        )
    if family == "three_phase_full":
        return run_three_phase_exp3(instance, tapes, replicate, simplified=False)
    if family == "three_phase_simplified":
        return run_three_phase_exp3(instance, tapes, replicate, simplified=True)
    if family == "exp3_standard":
        return run_standard_exp3(
            instance, tapes, replicate, exploration=params.get("exploration")
        )
    raise AssertionError(f"unhandled family {family}")
