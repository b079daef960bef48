from .correlation import CorrelationResult, GeneratorSpec, correlation_study, generate_instance
from .curves import DEFAULT_GRID, CurveStudyResult, two_instance_curve_study
from .io import config_hash, read_csv, write_csv, write_json
from .monotonicity import SweepResult, monotonicity_sweep, paired_difference
from .oracle import OracleComparison, oracle_equivalence
from .regret import (
    LinearRegretDemo,
    RegretSweepResult,
    baseline_instance,
    certain_feedback_twin,
    linear_regret_demo,
    regret_sweep,
)
from .runner import replicate_run, run_replicates

__all__ = [
    "CorrelationResult",
    "CurveStudyResult",
    "DEFAULT_GRID",
    "GeneratorSpec",
    "LinearRegretDemo",
    "OracleComparison",
    "RegretSweepResult",
    "SweepResult",
    "baseline_instance",
    "certain_feedback_twin",
    "config_hash",
    "correlation_study",
    "generate_instance",
    "linear_regret_demo",
    "monotonicity_sweep",
    "oracle_equivalence",
    "paired_difference",
    "read_csv",
    "regret_sweep",
    "replicate_run",
    "run_replicates",
    "two_instance_curve_study",
    "write_csv",
    "write_json",
]
