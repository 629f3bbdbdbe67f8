"""Minimum sum coloring through a penalty QUBO and a path-relinking BQP solver."""
from .engine import SolverConfig, solve
from .graph import Graph, degree_stats, parse_dimacs, read_dimacs
from .oracle import brute_force_mscp, brute_force_qubo
from .transform import (
    Coloring,
    Infeasible,
    LinearModel,
    QuboModel,
    build_linear_model,
    coloring_sum,
    decode,
    eval_h,
    penalty_components,
    to_qubo,
)

__version__ = "0.1.0"
