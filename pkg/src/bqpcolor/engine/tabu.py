"""One-flip tabu search over a sparse QUBO with an incrementally maintained gain vector.

``gains[i]`` is the exact change of ``h`` if ``x[i]`` flips:

    gains[i] = (1 - 2 x_i) * (q_ii + 2 * sum_{j != i} q_ij x_j)

Flipping ``i`` negates ``gains[i]`` and touches only the off-diagonal
neighbours of ``i``, so a move costs O(row length) plus the O(N) scan that
picks it.
"""
from __future__ import annotations

import time

import numpy as np
from numba import njit

from ..transform import QuboModel, eval_h
from .config import SolverConfig

# kernel return codes
BUDGET = 0
CUTOFF = 1
TARGET = 2

NO_TARGET = np.iinfo(np.int64).max


@njit(cache=True)
def compute_gains(indptr, indices, data, diag, x):
    N = diag.shape[0]
    gains = np.empty(N, dtype=np.int64)
    for i in range(N):
        s = diag[i]
        for p in range(indptr[i], indptr[i + 1]):
            s += 2 * data[p] * x[indices[p]]
        gains[i] = s if x[i] == 0 else -s
    return gains


@njit(cache=True)
def flip(indptr, indices, data, x, gains, i):
    """Flip ``x[i]`` and repair ``gains``; returns the change in ``h``."""
    delta = gains[i]
    d = 1 - 2 * x[i]
    x[i] = 1 - x[i]
    gains[i] = -delta
    for p in range(indptr[i], indptr[i + 1]):
        j = indices[p]
        gains[j] += 2 * data[p] * d * (1 - 2 * x[j])
    return delta


@njit(cache=True)
def seed_kernel_rng(seed):
    np.random.seed(seed)


@njit(cache=True)
def draw_tenure(N, tt_base, tt_divisor, tt_span):
    t = N // tt_divisor + np.random.randint(1, tt_span + 1)
    return t if t > tt_base else tt_base


@njit(cache=True)
def _tabu_steps(indptr, indices, data, x, gains, tabu_until, best_x, counters,
                mu, max_steps, target, tt_base, tt_divisor, tt_span, seed):
    """Advance a tabu search by up to ``max_steps`` iterations.

    ``counters`` holds ``[iteration, current_h, best_h, last_improvement]``
    and persists between calls so a search can be sliced for clock checks.
    """
    np.random.seed(seed)
    N = x.shape[0]
    it, cur, best, last = counters[0], counters[1], counters[2], counters[3]
    status = BUDGET
    for _ in range(max_steps):
        if best >= target:
            status = TARGET
            break
        if it - last >= mu:
            status = CUTOFF
            break
        it += 1
        chosen = -1
        best_gain = np.int64(0)
        ties = 0
        for i in range(N):
            g = gains[i]
            if tabu_until[i] >= it and cur + g <= best:
                continue
            if chosen == -1 or g > best_gain:
                chosen = i
                best_gain = g
                ties = 1
            elif g == best_gain:
                ties += 1
                if np.random.randint(0, ties) == 0:
                    chosen = i
        if chosen == -1:
            # everything tabu and nothing aspirates: release the oldest
            chosen = 0
            for i in range(1, N):
                if tabu_until[i] < tabu_until[chosen]:
                    chosen = i
        cur += flip(indptr, indices, data, x, gains, chosen)
        tabu_until[chosen] = it + draw_tenure(N, tt_base, tt_divisor, tt_span)
        if cur > best:
            best = cur
            best_x[:] = x
            last = it
    counters[0], counters[1], counters[2], counters[3] = it, cur, best, last
    return status


class SearchMonitor:
    """Shared stop conditions and global-best bookkeeping for one solve run."""

    def __init__(self, cfg: SolverConfig, clock=time.perf_counter):
        self.cfg = cfg
        self.clock = clock
        self.started = clock()
        self.deadline = self.started + cfg.time_limit
        self.iterations = 0
        self.best_h: int | None = None
        self.best_x: np.ndarray | None = None
        self.time_to_best = 0.0
        self.iterations_to_best = 0
        self.trajectory: list[tuple[float, int, int]] = []  # (seconds, iterations, h)

    @property
    def target(self) -> int:
        return NO_TARGET if self.cfg.target is None else self.cfg.target

    def elapsed(self) -> float:
        return self.clock() - self.started

    def remaining_iterations(self) -> int | None:
        if self.cfg.max_iterations is None:
            return None
        return max(0, self.cfg.max_iterations - self.iterations)

    def exhausted(self) -> bool:
        if self.remaining_iterations() == 0:
            return True
        if self.best_h is not None and self.best_h >= self.target:
            return True
        return self.clock() >= self.deadline

    def offer(self, x: np.ndarray, h: int) -> bool:
        if self.best_h is not None and h <= self.best_h:
            return False
        self.best_h = int(h)
        self.best_x = x.copy()
        self.time_to_best = self.elapsed()
        self.iterations_to_best = self.iterations
        self.trajectory.append((self.time_to_best, self.iterations, self.best_h))
        return True


def chunk_size(dimension: int) -> int:
    return max(64, 2_000_000 // max(dimension, 1))


def tabu_search(q: QuboModel, start, mu: int, rng: np.random.Generator,
                cfg: SolverConfig | None = None,
                monitor: SearchMonitor | None = None) -> tuple[np.ndarray, int]:
    """Improve ``start`` until ``mu`` iterations pass without a new best.

    Returns the best assignment seen (``start`` itself if nothing beats it)
    and its value.  ``monitor`` adds the run-wide clock, iteration budget and
    target, and receives every new global best.
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    cfg = cfg or SolverConfig()
    x = np.array(start, dtype=np.int64)
    N = q.dimension
    gains = compute_gains(q.indptr, q.indices, q.data, q.diag, x)
    h = eval_h(q, x)
    best_x = x.copy()
    tabu_until = np.zeros(N, dtype=np.int64)
    counters = np.array([0, h, h, 0], dtype=np.int64)
    target = monitor.target if monitor is not None else NO_TARGET
    if monitor is not None:
        monitor.offer(best_x, h)
    step = chunk_size(N)
    while True:
        budget = step
        if monitor is not None:
            left = monitor.remaining_iterations()
            if left is not None:
                budget = min(budget, left)
            if budget == 0 or monitor.clock() >= monitor.deadline:
                break
        before = counters[0]
        status = _tabu_steps(q.indptr, q.indices, q.data, x, gains, tabu_until, best_x,
                             counters, mu, budget, target, cfg.tt_base, cfg.tt_divisor,
                             cfg.tt_rand_span, int(rng.integers(0, 2**31 - 1)))
        if monitor is not None:
            monitor.iterations += int(counters[0] - before)
            monitor.offer(best_x, int(counters[2]))
        if status != BUDGET:
            break
    return best_x.astype(np.int8), int(counters[2])
