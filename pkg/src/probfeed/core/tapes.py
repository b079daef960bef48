"""Deterministic, counter-addressable randomness tapes.

Every random quantity consumed anywhere in the library is a pure function of
``(master_seed, purpose, replicate, arm, index)``.  Streams are realized with
numpy's counter-based Philox generator, so reading a tape at an arbitrary
offset never perturbs any other stream.  This is what makes paired
(common-random-number) experiments work: changing one arm's feedback
probability changes *which side of a threshold* a shared uniform falls on,
and nothing else.

Feedback is realized as ``u < f`` (monotone in ``f`` for a fixed uniform) and
geometric block lengths via the inverse CDF (monotone non-increasing in
``f``), so coupled sweeps inherit the stochastic-dominance structure used by
the paired experiment designs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TapeSet",
    "draw_feedback",
    "geometric_from_uniform",
    "geometric_from_uniform_array",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Stream namespaces.  Values are arbitrary but frozen: changing them changes
# every sampled trajectory for a given master seed.
PURPOSE_FEEDBACK = 1  # per (arm, round): feedback indicator uniforms
PURPOSE_LOSS = 2  # per (arm, round): loss-noise uniforms
PURPOSE_BLOCK_GEOM = 3  # per (arm, block): pre-drawn geometric block lengths
PURPOSE_BLOCK_PICK = 4  # per block: which observation a block reports
PURPOSE_POLICY = 5  # per wrapped-algorithm round: algorithm's own randomness
PURPOSE_DRIVER = 6  # per round: driver-level randomness (e.g. filler arms)
PURPOSE_GENERATOR = 7  # per instance id: random-instance generation


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _derive_key(master_seed: int, purpose: int, replicate: int, arm: int) -> np.ndarray:
    h = _splitmix64(master_seed & _MASK64)
    for part in (purpose, replicate, arm):
        h = _splitmix64(h ^ ((part * _GOLDEN) & _MASK64))
    return np.array([h, _splitmix64(h)], dtype=np.uint64)


@dataclass(frozen=True)
class TapeSet:
    """Addressable uniform tapes derived from a single 64-bit master seed.

    Immutable and safely shareable across concurrent replicates; every read
    is stateless.
    """

    master_seed: int

    def uniforms(
        self, purpose: int, replicate: int, arm: int, start: int, count: int
    ) -> np.ndarray:
        """Uniforms in [0, 1) at positions ``start .. start+count-1`` of one stream."""
        if start < 0 or count < 0:
            raise ValueError("start and count must be non-negative")
        if count == 0:
            return np.empty(0)
        key = _derive_key(self.master_seed, purpose, replicate, arm)
        bitgen = np.random.Philox(key=key)
        # Philox.advance moves the 4-word counter, i.e. 4 doubles per step.
        bitgen.advance(start // 4)
        skip = start % 4
        vals = np.random.Generator(bitgen).random(count + skip)
        return vals[skip:]

    # Convenience accessors, one per stream namespace.

    def feedback_uniforms(self, replicate: int, arm: int, start: int, count: int) -> np.ndarray:
        return self.uniforms(PURPOSE_FEEDBACK, replicate, arm, start, count)

    def feedback_uniform(self, replicate: int, arm: int, round_index: int) -> float:
        return float(self.feedback_uniforms(replicate, arm, round_index, 1)[0])

    def loss_uniforms(self, replicate: int, arm: int, start: int, count: int) -> np.ndarray:
        return self.uniforms(PURPOSE_LOSS, replicate, arm, start, count)

    def loss_uniform(self, replicate: int, arm: int, round_index: int) -> float:
        return float(self.loss_uniforms(replicate, arm, round_index, 1)[0])

    def block_geometric_uniforms(
        self, replicate: int, arm: int, start_block: int, count: int
    ) -> np.ndarray:
        return self.uniforms(PURPOSE_BLOCK_GEOM, replicate, arm, start_block, count)

    def block_pick_uniform(self, replicate: int, block_index: int) -> float:
        return float(self.uniforms(PURPOSE_BLOCK_PICK, replicate, 0, block_index, 1)[0])

    def policy_uniforms(self, replicate: int, start: int, count: int) -> np.ndarray:
        return self.uniforms(PURPOSE_POLICY, replicate, 0, start, count)

    def driver_uniforms(self, replicate: int, start: int, count: int) -> np.ndarray:
        return self.uniforms(PURPOSE_DRIVER, replicate, 0, start, count)

    def generator_uniforms(self, instance_id: int, slot: int, count: int) -> np.ndarray:
        return self.uniforms(PURPOSE_GENERATOR, instance_id, slot, 0, count)

    def fork(self, salt: int) -> "TapeSet":
        """Derive an unrelated tape set (used for independent-mode sweeps)."""
        return TapeSet(_splitmix64(self.master_seed ^ ((salt * _GOLDEN) & _MASK64)))


def draw_feedback(u: float, f: float) -> bool:
    """Feedback indicator realized as ``u < f``.

    For a fixed uniform the outcome is monotone non-decreasing in ``f``,
    which is the coupling property paired sweeps rely on.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"uniform must lie in [0, 1), got {u}")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"feedback probability must lie in [0, 1], got {f}")
    return u < f


def geometric_from_uniform(u: float, f: float) -> int:
    """Number of pulls until first feedback, via the geometric inverse CDF.

    Returns ``ceil(ln(1-u) / ln(1-f))`` (and 1 when ``f == 1``).  For a fixed
    uniform the result is monotone non-increasing in ``f``.  ``f == 0`` is
    rejected: the wait would be infinite.
    """
    if not 0.0 < f <= 1.0:
        raise ValueError(f"feedback probability must lie in (0, 1], got {f}")
    if not 0.0 < u < 1.0:
        raise ValueError(f"uniform must lie in (0, 1), got {u}")
    if f == 1.0:
        return 1
    q = math.log1p(-u) / math.log1p(-f)
    return max(1, math.ceil(q))


def geometric_from_uniform_array(u: np.ndarray, f: float) -> np.ndarray:
    """Vectorized :func:`geometric_from_uniform`; accepts u == 0 (maps to 1)."""
    if not 0.0 < f <= 1.0:
        raise ValueError(f"feedback probability must lie in (0, 1], got {f}")
    if f == 1.0:
        return np.ones(len(u), dtype=np.int64)
    q = np.ceil(np.log1p(-u) / math.log1p(-f))
    return np.maximum(1, q).astype(np.int64)
