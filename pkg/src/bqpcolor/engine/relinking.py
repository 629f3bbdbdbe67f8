"""Path relinking over an elite reference set, with tabu search as the improver."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..transform import QuboModel, eval_h
from .config import SolverConfig
from .tabu import SearchMonitor, compute_gains, flip, tabu_search

RETRY_FACTOR = 50


class RefSet:
    """Elite solutions sorted best-first, pairwise distinct, at most ``capacity``."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._members: list[tuple[np.ndarray, int]] = []
        self._keys: set[bytes] = set()

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __getitem__(self, i):
        return self._members[i]

    @staticmethod
    def key(x) -> bytes:
        return np.asarray(x, dtype=np.int8).tobytes()

    def __contains__(self, x) -> bool:
        return self.key(x) in self._keys

    @property
    def best(self) -> tuple[np.ndarray, int]:
        return self._members[0]

    @property
    def worst(self) -> tuple[np.ndarray, int]:
        return self._members[-1]

    def values(self) -> list[int]:
        return [h for _, h in self._members]

    def add(self, x, h: int) -> bool:
        """Insert without eviction; refuses duplicates and a full set."""
        if x in self or len(self) >= self.capacity:
            return False
        self._insert(x, h)
        return True

    def _insert(self, x, h: int) -> None:
        x = np.asarray(x, dtype=np.int8).copy()
        x.setflags(write=False)
        self._members.append((x, int(h)))
        self._keys.add(self.key(x))
        # stable: ties keep arrival order
        self._members.sort(key=lambda m: -m[1])

    def replace_worst(self, x, h: int) -> None:
        old, _ = self._members.pop()
        self._keys.discard(self.key(old))
        self._insert(x, h)


def update_refset(refset: RefSet, candidate, h: int) -> bool:
    """Swap ``candidate`` in for the worst member if it is better and new."""
    if candidate in refset:
        return False
    if len(refset) < refset.capacity:
        refset.add(candidate, h)
        return True
    if h <= refset.worst[1]:
        return False
    refset.replace_worst(candidate, h)
    return True


def _fill(q: QuboModel, refset: RefSet, cfg: SolverConfig, rng: np.random.Generator,
          monitor: SearchMonitor | None) -> None:
    N = q.dimension
    mu = cfg.mu_initial(N)
    for _ in range(RETRY_FACTOR * refset.capacity):
        if len(refset) >= refset.capacity:
            break
        if monitor is not None and len(refset) > 0 and monitor.exhausted():
            break
        start = rng.integers(0, 2, size=N, dtype=np.int8)
        x, h = tabu_search(q, start, mu, rng, cfg, monitor)
        refset.add(x, h)


def init_refset(q: QuboModel, cfg: SolverConfig, rng: np.random.Generator,
                monitor: SearchMonitor | None = None) -> RefSet:
    """Tabu-improved uniform random starts until ``refset_size`` distinct members exist."""
    refset = RefSet(cfg.refset_size)
    _fill(q, refset, cfg, rng, monitor)
    return refset


def rebuild_refset(q: QuboModel, refset: RefSet, cfg: SolverConfig, rng: np.random.Generator,
                   monitor: SearchMonitor | None = None) -> RefSet:
    """Keep the best member and regenerate the rest as in :func:`init_refset`."""
    fresh = RefSet(refset.capacity)
    fresh.add(*refset.best)
    _fill(q, fresh, cfg, rng, monitor)
    return fresh


@njit(cache=True)
def _walk(indptr, indices, data, x, gains, h0, order):
    values = np.empty(order.shape[0] + 1, dtype=np.int64)
    values[0] = h0
    h = h0
    for t in range(order.shape[0]):
        h += flip(indptr, indices, data, x, gains, order[t])
        values[t + 1] = h
    return values


@dataclass(frozen=True)
class RelinkPath:
    """One-flip trajectory from ``start`` (initiating) to the guiding solution.

    Step ``t`` is ``start`` with ``flips[:t]`` applied; ``values[t]`` is its h.
    """
    start: np.ndarray
    flips: np.ndarray
    values: np.ndarray = field(repr=False)

    @property
    def distance(self) -> int:
        return len(self.flips)

    def __len__(self):
        return len(self.flips) + 1

    def __getitem__(self, t: int) -> np.ndarray:
        if not -len(self) <= t < len(self):
            raise IndexError(t)
        t %= len(self)
        x = self.start.copy()
        x[self.flips[:t]] ^= 1
        return x

    def __iter__(self):
        return (self[t] for t in range(len(self)))


def relink(q: QuboModel, initiating, guiding, rng: np.random.Generator) -> RelinkPath:
    """Flip the differing variables of ``initiating`` one at a time, in random order."""
    xi = np.asarray(initiating, dtype=np.int8)
    xj = np.asarray(guiding, dtype=np.int8)
    diff = np.flatnonzero(xi != xj)
    if diff.size == 0:
        raise ValueError("initiating and guiding solutions are identical")
    order = rng.permutation(diff).astype(np.int64)
    x = xi.astype(np.int64)
    gains = compute_gains(q.indptr, q.indices, q.data, q.diag, x)
    values = _walk(q.indptr, q.indices, q.data, x, gains, eval_h(q, xi), order)
    return RelinkPath(xi.copy(), order, values)


def select_on_path(path: RelinkPath, cfg: SolverConfig) -> int | None:
    """Step index of the best solution in the middle of the path, or None to skip.

    Candidates keep Hamming distance at least ``ceil(margin * d)`` from both
    ends; if that leaves nothing, any interior step qualifies.  Ties go to
    the earliest step.  A path with no interior (``d == 1``) is skipped.
    """
    d = path.distance
    if d < 2:
        return None
    m = cfg.margin(d)
    lo, hi = max(1, m), min(d - 1, d - m)
    if lo > hi:
        lo, hi = 1, d - 1
    window = path.values[lo:hi + 1]
    return lo + int(np.argmax(window))


def pr_round(q: QuboModel, refset: RefSet, cfg: SolverConfig, rng: np.random.Generator,
             monitor: SearchMonitor | None = None) -> int:
    """Relink every ordered pair of the current members; returns the number of insertions.

    Pairs come from the set as it stands when the round starts; ``refset``
    is updated in place after every improvement.
    """
    members = [x for x, _ in refset]
    inserted = 0
    for xi, xj in itertools.permutations(members, 2):
        if monitor is not None and monitor.exhausted():
            break
        path = relink(q, xi, xj, rng)
        t = select_on_path(path, cfg)
        if t is None:
            continue
        x, h = tabu_search(q, path[t], cfg.mu_path, rng, cfg, monitor)
        inserted += update_refset(refset, x, h)
    return inserted


@dataclass
class SolveResult:
    best_x: np.ndarray
    best_h: int
    iterations: int
    iterations_to_best: int
    time_to_best: float
    elapsed: float
    rounds: int
    rebuilds: int
    trajectory: list[tuple[float, int, int]]
    init_iterations: int = 0

    def improvements_after_init(self) -> int:
        """Global-best improvements found after the reference set was first built."""
        return sum(1 for _, it, _ in self.trajectory if it > self.init_iterations)


def solve(q: QuboModel, cfg: SolverConfig) -> SolveResult:
    """Maximize ``q`` by path relinking until a stop condition of ``cfg`` fires."""
    rng = np.random.default_rng(cfg.seed)
    monitor = SearchMonitor(cfg)
    refset = init_refset(q, cfg, rng, monitor)
    init_iterations = monitor.iterations
    rounds = rebuilds = 0
    while not monitor.exhausted() and len(refset) >= 2:
        inserted = pr_round(q, refset, cfg, rng, monitor)
        rounds += 1
        if inserted == 0 and not monitor.exhausted():
            refset = rebuild_refset(q, refset, cfg, rng, monitor)
            rebuilds += 1
    assert monitor.best_x is not None
    return SolveResult(
        best_x=monitor.best_x.astype(np.int8),
        best_h=monitor.best_h,
        iterations=monitor.iterations,
        iterations_to_best=monitor.iterations_to_best,
        time_to_best=monitor.time_to_best,
        elapsed=monitor.elapsed(),
        rounds=rounds,
        rebuilds=rebuilds,
        trajectory=list(monitor.trajectory),
        init_iterations=init_iterations,
    )
