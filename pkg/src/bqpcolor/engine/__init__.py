"""Path-relinking maximizer for general binary quadratic programs."""
from .config import SolverConfig
from .relinking import (
    RefSet,
    RelinkPath,
    SolveResult,
    init_refset,
    pr_round,
    rebuild_refset,
    relink,
    select_on_path,
    solve,
    update_refset,
)
from .tabu import SearchMonitor, compute_gains, flip, tabu_search

__all__ = [
    "RefSet", "RelinkPath", "SearchMonitor", "SolveResult", "SolverConfig",
    "compute_gains", "flip", "init_refset", "pr_round", "rebuild_refset", "relink",
    "select_on_path", "solve", "tabu_search", "update_refset",
]
