"""Multi-armed bandit simulation with probabilistic feedback.

Simulates no-regret algorithms whose arms reveal their loss only with some
per-arm probability, measures per-arm engagement (pull counts and
feedback-observation counts) alongside pseudo-regret, and runs coupled
paired experiments that expose how engagement moves when a single arm's
feedback rate changes.
"""

__version__ = "0.1.0"

from . import algorithms, core, metrics, transforms  # noqa: F401
