from .aae import (
    AaeState,
    ActiveElimination,
    aae_block_quota,
    aae_eliminate,
    aae_phase_quota,
)
from .base import BanditAlgorithm, FeedDisciplineError, PolicyStream
from .exp3 import Exp3, Exp3State, exp3_learning_rate, exp3_update, sample_from_simplex
from .ucb import Ucb, UcbState, ucb_index, ucb_select

__all__ = [
    "AaeState",
    "ActiveElimination",
    "BanditAlgorithm",
    "Exp3",
    "Exp3State",
    "FeedDisciplineError",
    "PolicyStream",
    "Ucb",
    "UcbState",
    "aae_block_quota",
    "aae_eliminate",
    "aae_phase_quota",
    "exp3_learning_rate",
    "exp3_update",
    "sample_from_simplex",
    "ucb_index",
    "ucb_select",
]
