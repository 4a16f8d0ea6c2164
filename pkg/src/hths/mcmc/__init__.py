from .chain import (
    FAMILY_CODES,
    DivergedChainError,
    DrawStore,
    effective_sample_size,
    lower_median,
    rao_blackwell_shrinkage,
    run_chain,
    summarize,
)
from .state import (
    ChainConfig,
    FixedGlobals,
    GlobalPriors,
    ModelState,
    PosteriorSummary,
    initial_state,
)
from .store import load_store, save_store

__all__ = [
    "FAMILY_CODES",
    "ChainConfig",
    "DivergedChainError",
    "DrawStore",
    "FixedGlobals",
    "GlobalPriors",
    "ModelState",
    "PosteriorSummary",
    "effective_sample_size",
    "initial_state",
    "load_store",
    "lower_median",
    "rao_blackwell_shrinkage",
    "run_chain",
    "save_store",
    "summarize",
]
