from .blocks import bbda_block_size, bbdivide_block_size, validate_f_star
from .drivers import run_bb_da, run_bb_divide, run_bb_pull, run_simulated_bb_pull
from .env import EnvView
from .registry import ALGORITHM_IDS, ORACLE_IDS, run_algorithm, validate_algorithm
from .three_phase import (
    ThreePhaseState,
    exp3_loss_estimator,
    run_standard_exp3,
    run_three_phase_exp3,
)

__all__ = [
    "ALGORITHM_IDS",
    "ORACLE_IDS",
    "EnvView",
    "ThreePhaseState",
    "bbda_block_size",
    "bbdivide_block_size",
    "exp3_loss_estimator",
    "run_algorithm",
    "run_bb_da",
    "run_bb_divide",
    "run_bb_pull",
    "run_simulated_bb_pull",
    "run_standard_exp3",
    "run_three_phase_exp3",
    "validate_algorithm",
    "validate_f_star",
]
