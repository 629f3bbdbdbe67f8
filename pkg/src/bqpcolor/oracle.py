"""Exhaustive ground truth for tiny instances.

Both searches visit candidates in a fixed lexicographic order and keep the
first optimum they meet, so witnesses are deterministic: colorings ascend
(vertex 1 first, color 1 before 2), binary vectors descend (x_0 first, 1
before 0).  Pruning only skips subtrees that provably cannot beat the
incumbent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from numba import njit

from .graph import Graph
from .transform import Coloring, QuboModel

MSCP_ENUMERATION_LIMIT = 10**8
QUBO_ENUMERATION_LIMIT = 24
QUBO_SEARCH_LIMIT = 48


class NoLegalColoring(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Any
    count: int | None = None


def brute_force_mscp(g: Graph, num_colors: int) -> OracleResult:
    """Minimum color sum over all legal colorings with colors ``1..num_colors``."""
    n, K = g.vertex_count, num_colors
    if K < 1:
        raise ValueError("num_colors must be >= 1")
    if K**n > MSCP_ENUMERATION_LIMIT:
        raise ValueError(f"{K}^{n} colorings exceed the enumeration guard {MSCP_ENUMERATION_LIMIT:.0e}")
    # only earlier neighbors matter when coloring vertices in order
    earlier = [[v for v in nbrs if v < u] for u, nbrs in enumerate(g.adjacency)]
    colors = [0] * n
    best = [None, None]  # value, witness

    def extend(u: int, partial: int) -> None:
        if best[0] is not None and partial + (n - u) >= best[0]:
            return
        if u == n:
            best[0], best[1] = partial, tuple(colors)
            return
        for k in range(1, K + 1):
            if all(colors[v] != k for v in earlier[u]):
                colors[u] = k
                extend(u + 1, partial + k)
        colors[u] = 0

    extend(0, 0)
    if best[0] is None:
        raise NoLegalColoring(f"no legal coloring of {g!r} with {K} colors")
    return OracleResult(best[0], Coloring(best[1]))


def brute_force_qubo(q: QuboModel, method: str = "auto") -> OracleResult:
    """Exact ``max x'Qx + c`` over all binary ``x``.

    ``method="enumerate"`` scores every vector (N <= 24); ``"search"`` is a
    depth-first enumeration with an upper-bound cut, usable up to N = 48.
    ``"auto"`` enumerates for N <= 20 and searches otherwise.
    """
    N = q.dimension
    if method == "auto":
        method = "enumerate" if N <= 20 else "search"
    if method == "enumerate":
        return _enumerate_qubo(q)
    if method == "search":
        return _search_qubo(q)
    raise ValueError(f"unknown method {method!r}")


def _enumerate_qubo(q: QuboModel) -> OracleResult:
    N = q.dimension
    if N > QUBO_ENUMERATION_LIMIT:
        raise ValueError(f"N={N} exceeds the enumeration limit {QUBO_ENUMERATION_LIMIT}")
    Q = q.to_dense().astype(np.float64)
    bound = float(np.abs(Q).sum()) + abs(q.constant)
    if bound >= 2**53:
        raise OverflowError("coefficients too large for exact float evaluation")
    # x_0 is the most significant bit; codes run from all-ones down to zero
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    chunk = 1 << min(N, 16)
    best_val, best_code, count = None, 0, 0
    for stop in range(1 << N, 0, -chunk):
        codes = np.arange(stop - 1, stop - 1 - chunk, -1, dtype=np.int64)
        X = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        vals = np.rint(np.einsum("ij,ij->i", X @ Q, X)).astype(np.int64)
        top = int(vals.max())
        if best_val is None or top > best_val:
            best_val, count = top, 0
            best_code = int(codes[int(np.argmax(vals))])
        if top == best_val:
            count += int(np.count_nonzero(vals == top))
    witness = ((best_code >> shifts) & 1).astype(np.int8)
    return OracleResult(best_val + q.constant, witness, count)


def _search_qubo(q: QuboModel) -> OracleResult:
    N = q.dimension
    if N > QUBO_SEARCH_LIMIT:
        raise ValueError(f"N={N} exceeds the exact search limit {QUBO_SEARCH_LIMIT}")
    Q = q.to_dense()
    diag = np.diag(Q).copy()
    off = Q - np.diag(diag)
    pos = np.maximum(off, 0)
    # tail_pos[d]: optimistic pairwise gain among variables d..N-1
    tail_pos = np.array([2 * int(np.triu(pos[d:, d:], 1).sum()) for d in range(N + 1)], dtype=np.int64)
    best_val, best_x = _depth_first(diag, 2 * off, tail_pos)
    return OracleResult(int(best_val) + q.constant, best_x)


@njit(cache=True)
def _depth_first(diag, twice_off, tail_pos):
    N = diag.shape[0]
    field = diag.copy()  # q_jj + 2 * sum over fixed set i of q_ij
    x = np.zeros(N, dtype=np.int8)
    best_x = np.zeros(N, dtype=np.int8)
    best_val = np.int64(0)
    have_best = False
    # stage 0: fresh node, 1: back from the x_d = 1 branch, 2: both branches done
    stage = np.zeros(N + 1, dtype=np.int8)
    value = np.zeros(N + 1, dtype=np.int64)
    d = 0
    while d >= 0:
        if d == N:
            if not have_best or value[N] > best_val:
                best_val = value[N]
                best_x[:] = x
                have_best = True
            d -= 1
            continue
        if stage[d] == 0:
            if have_best:
                ub = value[d] + tail_pos[d]
                for j in range(d, N):
                    if field[j] > 0:
                        ub += field[j]
                if ub <= best_val:
                    d -= 1
                    continue
            x[d] = 1
            for j in range(d + 1, N):
                field[j] += twice_off[d, j]
            value[d + 1] = value[d] + field[d]
            stage[d] = 1
        elif stage[d] == 1:
            for j in range(d + 1, N):
                field[j] -= twice_off[d, j]
            x[d] = 0
            value[d + 1] = value[d]
            stage[d] = 2
        else:
            stage[d] = 0
            d -= 1
            continue
        d += 1
        stage[d] = 0
    return best_val, best_x
