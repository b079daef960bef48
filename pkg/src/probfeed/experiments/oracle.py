"""Statistical equivalence check between a transform and its simulated twin.

The simulated pull transform drives the same wrapped algorithm with
pre-drawn geometric block lengths; its pull-count distribution matches the
real transform's, so per-arm mean pull counts must agree within Monte Carlo
error.  A deliberately mismatched rate in the oracle must make the check
fail (negative control), otherwise the test has no power.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..core.instance import Instance
from .runner import run_replicates

__all__ = ["OracleComparison", "oracle_equivalence"]

_REAL_TO_ORACLE = {
    "bbpull_ucb": "simulated_bbpull_ucb",
    "bbpull_aae": "simulated_bbpull_aae",
}


@dataclass
class OracleComparison:
    algorithm: str
    oracle: str
    replicates: int
    # rows: (arm, apc_real, se_real, apc_sim, se_sim, diff, bound)
    rows: List[tuple] = field(default_factory=list)

    @property
    def all_within_bound(self) -> bool:
        return all(abs(r[5]) <= r[6] for r in self.rows)


def oracle_equivalence(
    algorithm_id: str,
    instance: Instance,
    master_seed: int,
    replicates: int,
    feedback_probs_override: Optional[list] = None,
    jobs: int = 1,
) -> OracleComparison:
    """Per-arm pull-count comparison at 3 combined standard errors.

    The real and simulated runs use disjoint tape namespaces, so the two
    Monte Carlo estimates are independent; ``feedback_probs_override`` feeds
    wrong rates to the oracle only.
    """
    if algorithm_id not in _REAL_TO_ORACLE:
        raise ValueError(
            f"no simulated twin registered for {algorithm_id!r}; "
            f"choose one of {sorted(_REAL_TO_ORACLE)}"
        )
    oracle_id = _REAL_TO_ORACLE[algorithm_id]
    apc_r, _, _ = run_replicates(algorithm_id, instance, master_seed, replicates, None, jobs)
    params = (
        None
        if feedback_probs_override is None
        else {"feedback_probs_override": list(feedback_probs_override)}
    )
    apc_s, _, _ = run_replicates(oracle_id, instance, master_seed, replicates, params, jobs)
    comparison = OracleComparison(
        algorithm=algorithm_id, oracle=oracle_id, replicates=replicates
    )
    R = replicates
    for arm in range(instance.num_arms):
        mr, ms = float(apc_r[:, arm].mean()), float(apc_s[:, arm].mean())
        ser = float(apc_r[:, arm].std(ddof=1) / np.sqrt(R)) if R > 1 else 0.0
        ses = float(apc_s[:, arm].std(ddof=1) / np.sqrt(R)) if R > 1 else 0.0
        bound = 3.0 * float(np.hypot(ser, ses))
        comparison.rows.append((arm, mr, ser, ms, ses, mr - ms, bound))
    return comparison
