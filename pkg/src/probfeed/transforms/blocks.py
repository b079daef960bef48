"""Block-size rules for the divide-style transforms."""

from __future__ import annotations

import math

__all__ = ["bbdivide_block_size", "bbda_block_size", "validate_f_star"]


def bbdivide_block_size(horizon: float, f_star: float) -> int:
    """Fixed block size ``ceil(3 ln T / f*)`` shared by every arm."""
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    if not 0.0 < f_star <= 1.0:
        raise ValueError(f"f_star must lie in (0, 1], got {f_star}")
    return math.ceil(3.0 * math.log(horizon) / f_star)


def bbda_block_size(horizon: float, f_star: float, f_arm: float) -> int:
    """Arm-dependent block size ``ceil((3 ln T / f*) * (1 + f_i))``."""
    if not 0.0 <= f_arm <= 1.0:
        raise ValueError(f"arm feedback probability must lie in [0, 1], got {f_arm}")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    if not 0.0 < f_star <= 1.0:
        raise ValueError(f"f_star must lie in (0, 1], got {f_star}")
    return math.ceil(3.0 * math.log(horizon) / f_star * (1.0 + f_arm))


def validate_f_star(f_star: float, feedback_probs) -> None:
    if not 0.0 < f_star <= 1.0:
        raise ValueError(f"f_star must lie in (0, 1], got {f_star}")
    fmin = min(feedback_probs)
    if f_star > fmin:
        raise ValueError(
            f"f_star={f_star} exceeds the smallest feedback probability {fmin}"
        )
