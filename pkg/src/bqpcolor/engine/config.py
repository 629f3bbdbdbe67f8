from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SolverConfig:
    """Path-relinking parameters.

    Tabu tenure is ``max(tt_base, N // tt_divisor + U{1..tt_rand_span})``,
    drawn afresh for every flip.  Initial solutions are improved with cutoff
    ``mu_initial_factor * N``, path solutions with ``mu_path``.

    The run stops at the first of: ``time_limit`` seconds, ``max_iterations``
    tabu iterations in total, or a best value ``>= target``.  Only the
    iteration budget gives bit-reproducible runs.
    """
    refset_size: int = 10
    time_limit: float = 60.0
    seed: int = 0
    tt_base: int = 40
    tt_divisor: int = 100
    tt_rand_span: int = 50
    mu_initial_factor: int = 2
    mu_path: int = 500
    path_margin_fraction: float = 0.3
    max_iterations: int | None = None
    target: int | None = None

    def __post_init__(self):
        if self.refset_size < 3:
            raise ValueError(f"refset_size must be >= 3, got {self.refset_size}")
        if not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if not 0 < self.path_margin_fraction < 0.5:
            raise ValueError("path_margin_fraction must lie in (0, 0.5)")
        if self.tt_rand_span < 1 or self.tt_divisor < 1 or self.tt_base < 0:
            raise ValueError("invalid tabu tenure parameters")
        if self.mu_path < 1 or self.mu_initial_factor < 1:
            raise ValueError("improvement cutoffs must be >= 1")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def mu_initial(self, dimension: int) -> int:
        return max(1, self.mu_initial_factor * dimension)

    def tenure_bounds(self, dimension: int) -> tuple[int, int]:
        lo = max(self.tt_base, dimension // self.tt_divisor + 1)
        hi = max(self.tt_base, dimension // self.tt_divisor + self.tt_rand_span)
        return lo, hi

    def margin(self, distance: int) -> int:
        return math.ceil(self.path_margin_fraction * distance)
