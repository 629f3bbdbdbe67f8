"""Linear sum-coloring model and its penalty reformulation as a maximize-form QUBO.

Variable ``x[u, k]`` (vertex ``u`` takes color ``k``, both 1-based) lives at
flat index ``(u - 1) * K + (k - 1)``.  The QUBO objective is

    h(x) = sum_i q[i,i] x_i + 2 * sum_{i<j} q[i,j] x_i x_j + c

with ``q`` symmetric, which equals ``-f(x) + f1(x) + f2(x)`` where ``f`` is
the color sum, ``f1`` the squared one-color-per-vertex violation scaled by
the penalty and ``f2`` the (ordered-pair) edge-conflict penalty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Graph

INT64_MAX = np.iinfo(np.int64).max
DENSE_LIMIT = 2000


class Infeasible(ValueError):
    """An assignment that does not decode to a legal coloring.

    Exactly one of ``vertex`` (1-based, colored 0 or >= 2 times) and ``edge``
    (1-based endpoints sharing ``color``) is set.
    """

    def __init__(self, message: str, vertex: int | None = None,
                 edge: tuple[int, int] | None = None, color: int | None = None):
        super().__init__(message)
        self.vertex = vertex
        self.edge = edge
        self.color = color


@dataclass(frozen=True)
class LinearModel:
    graph: Graph
    num_colors: int

    def __post_init__(self):
        if self.num_colors < 1:
            raise ValueError(f"number of colors must be >= 1, got {self.num_colors}")

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def dimension(self) -> int:
        return self.graph.vertex_count * self.num_colors

    def index(self, u: int, k: int) -> int:
        """Flat index of ``x[u, k]`` for 1-based vertex ``u`` and color ``k``."""
        if not (1 <= u <= self.n and 1 <= k <= self.num_colors):
            raise IndexError(f"x[{u},{k}] outside {self.n} vertices x {self.num_colors} colors")
        return (u - 1) * self.num_colors + (k - 1)

    def variable(self, i: int) -> tuple[int, int]:
        u, k = divmod(i, self.num_colors)
        return u + 1, k + 1

    @cached_property
    def objective_coeffs(self) -> np.ndarray:
        return np.tile(np.arange(1, self.num_colors + 1, dtype=np.int64), self.n)

    def equalities(self) -> list[list[int]]:
        """One index list per vertex: the variables that must sum to 1."""
        K = self.num_colors
        return [list(range(u * K, (u + 1) * K)) for u in range(self.n)]

    def inequalities(self) -> list[tuple[int, int]]:
        """Index pairs ``(x[u,k], x[v,k])`` that may not both be 1, per edge and color."""
        return [
            (self.index(u, k), self.index(v, k))
            for u, v in self.graph.sorted_edges()
            for k in range(1, self.num_colors + 1)
        ]

    def constraint_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(A, b)`` of the one-color-per-vertex system ``A x = b``."""
        A = np.zeros((self.n, self.dimension), dtype=np.int64)
        for row, cols in enumerate(self.equalities()):
            A[row, cols] = 1
        return A, np.ones(self.n, dtype=np.int64)


def build_linear_model(g: Graph, num_colors: int) -> LinearModel:
    return LinearModel(g, num_colors)


@dataclass(frozen=True, eq=False)
class QuboModel:
    """Sparse symmetric integer QUBO, maximize ``x'Qx + constant``.

    Off-diagonal entries are stored in CSR form with both ``(i, j)`` and
    ``(j, i)`` present; the diagonal is kept separately.
    """
    diag: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    constant: int = 0
    penalty: int | None = None
    rows_of_nnz: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("diag", "indptr", "indices", "data"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        rows = np.repeat(np.arange(self.dimension, dtype=np.int64), np.diff(self.indptr))
        rows.setflags(write=False)
        object.__setattr__(self, "rows_of_nnz", rows)
        object.__setattr__(self, "constant", int(self.constant))

    @property
    def dimension(self) -> int:
        return len(self.diag)

    @property
    def q(self) -> list[list[tuple[int, int]]]:
        """Per-row ``(column, coefficient)`` lists, diagonal included."""
        out = []
        for i in range(self.dimension):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            row = [(int(j), int(v)) for j, v in zip(self.indices[lo:hi], self.data[lo:hi])]
            if self.diag[i]:
                row.append((i, int(self.diag[i])))
            out.append(sorted(row))
        return out

    def upper_entries(self) -> Iterable[tuple[int, int, int]]:
        """``(i, j, q_ij)`` for ``i <= j`` and ``q_ij != 0``, row-major."""
        for i, row in enumerate(self.q):
            for j, v in row:
                if j >= i:
                    yield i, j, v

    def offdiag_pair_count(self) -> int:
        return len(self.data) // 2

    def to_dense(self) -> np.ndarray:
        N = self.dimension
        if N > DENSE_LIMIT:
            raise ValueError(f"dense form limited to N <= {DENSE_LIMIT}, got {N}")
        Q = np.zeros((N, N), dtype=np.int64)
        Q[self.rows_of_nnz, self.indices] = self.data
        Q[np.arange(N), np.arange(N)] += self.diag
        return Q

    @classmethod
    def from_entries(cls, dimension: int, entries: Iterable[tuple[int, int, int]],
                     constant: int = 0, penalty: int | None = None) -> "QuboModel":
        """Build from symmetric-matrix entries ``(i, j, q_ij)``; each unordered pair once."""
        diag = np.zeros(dimension, dtype=np.int64)
        off: dict[tuple[int, int], int] = {}
        for i, j, v in entries:
            if not (0 <= i < dimension and 0 <= j < dimension):
                raise IndexError(f"entry ({i}, {j}) outside dimension {dimension}")
            if i == j:
                diag[i] += v
            else:
                key = (i, j) if i < j else (j, i)
                off[key] = off.get(key, 0) + v
        rows: list[list[tuple[int, int]]] = [[] for _ in range(dimension)]
        for (i, j), v in off.items():
            if v:
                rows[i].append((j, v))
                rows[j].append((i, v))
        indptr = np.zeros(dimension + 1, dtype=np.int64)
        indices, data = [], []
        for i, row in enumerate(rows):
            row.sort()
            indices.extend(j for j, _ in row)
            data.extend(v for _, v in row)
            indptr[i + 1] = len(indices)
        return cls(diag, indptr, np.array(indices, dtype=np.int64),
                   np.array(data, dtype=np.int64), constant, penalty)

    @classmethod
    def from_dense(cls, Q, constant: int = 0) -> "QuboModel":
        Q = np.asarray(Q, dtype=np.int64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if not np.array_equal(Q, Q.T):
            raise ValueError("Q must be symmetric")
        N = Q.shape[0]
        iu, ju = np.triu_indices(N)
        return cls.from_entries(N, zip(iu.tolist(), ju.tolist(), Q[iu, ju].tolist()), constant)


def check_penalty(penalty: int, num_colors: int) -> None:
    if penalty >= 0:
        raise ValueError(f"penalty must be negative for a maximize objective, got {penalty}")
    if 2 * abs(penalty) <= num_colors:
        raise ValueError(f"|penalty| = {abs(penalty)} must exceed K/2 = {num_colors / 2:g}")


def to_qubo(m: LinearModel, penalty: int) -> QuboModel:
    """Fold the color objective and both penalty terms into one QUBO."""
    check_penalty(penalty, m.num_colors)
    K, n, P = m.num_colors, m.n, penalty
    N = m.dimension
    diag = -m.objective_coeffs - P
    entries: list[tuple[int, int, int]] = [(i, i, int(d)) for i, d in enumerate(diag)]
    for u in range(n):
        base = u * K
        entries.extend((base + a, base + b, P) for a in range(K) for b in range(a + 1, K))
    entries.extend((i, j, P) for i, j in m.inequalities())
    max_coef = max(K + abs(P), abs(P))
    if N * N * max_coef + abs(P * n) > INT64_MAX:
        raise OverflowError(f"N={N} with coefficients up to {max_coef} may overflow int64")
    return QuboModel.from_entries(N, entries, constant=P * n, penalty=P)


def _as_bits(x, dimension: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (dimension,):
        raise ValueError(f"assignment has shape {x.shape}, expected ({dimension},)")
    return x


def eval_h(q: QuboModel, x) -> int:
    x = _as_bits(x, q.dimension)
    quad = int(np.dot(q.data, x[q.rows_of_nnz] * x[q.indices]))
    return int(np.dot(q.diag, x)) + quad + q.constant


def eval_h_dense(q: QuboModel, x) -> int:
    """Reference ``x'Qx + c`` through the dense matrix (small models only)."""
    x = _as_bits(x, q.dimension)
    return int(x @ q.to_dense() @ x) + q.constant


def penalty_components(m: LinearModel, penalty: int, x) -> tuple[int, int, int]:
    """``(f, f1, f2)`` evaluated straight from the linear model."""
    x = _as_bits(x, m.dimension)
    f = int(np.dot(m.objective_coeffs, x))
    A, b = m.constraint_matrix()
    r = A @ x - b
    f1 = penalty * int(r @ r)
    X = x.reshape(m.n, m.num_colors)
    conflicts = sum(int(np.dot(X[u - 1], X[v - 1])) for u, v in m.graph.edges)
    f2 = 2 * penalty * conflicts
    return f, f1, f2


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    @property
    def sum(self) -> int:
        return sum(self.colors)

    def color_of(self, u: int) -> int:
        return self.colors[u - 1]

    def is_legal(self, g: Graph) -> bool:
        return all(self.colors[u - 1] != self.colors[v - 1] for u, v in g.edges)

    def to_assignment(self, m: LinearModel) -> np.ndarray:
        x = np.zeros(m.dimension, dtype=np.int8)
        for u, k in enumerate(self.colors, start=1):
            x[m.index(u, k)] = 1
        return x


def coloring_sum(c: Coloring) -> int:
    return c.sum


def decode(m: LinearModel, x) -> Coloring:
    """Read the coloring out of ``x``; raises :class:`Infeasible` on any violation."""
    X = _as_bits(x, m.dimension).reshape(m.n, m.num_colors)
    counts = X.sum(axis=1)
    for u in range(m.n):
        if counts[u] != 1:
            what = "uncolored" if counts[u] == 0 else f"has {counts[u]} colors"
            raise Infeasible(f"vertex {u + 1} {what}", vertex=u + 1)
    colors = tuple(int(k) + 1 for k in X.argmax(axis=1))
    for u, v in m.graph.sorted_edges():
        if colors[u - 1] == colors[v - 1]:
            raise Infeasible(f"edge ({u}, {v}) conflict on color {colors[u - 1]}",
                             edge=(u, v), color=colors[u - 1])
    return Coloring(colors)


def write_qubo(q: QuboModel, path: str | Path) -> None:
    """Sparse text export: header ``N nnz constant``, then upper-triangle ``i j q_ij``."""
    entries = list(q.upper_entries())
    lines = [
        "# maximize sum_i q_ii x_i + 2 sum_{i<j} q_ij x_i x_j + constant; 0-based, i <= j",
        f"{q.dimension} {len(entries)} {q.constant}",
    ]
    lines.extend(f"{i} {j} {v}" for i, j, v in entries)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_qubo(path: str | Path) -> QuboModel:
    rows = [ln.split() for ln in Path(path).read_text(encoding="utf-8").splitlines()
            if ln.strip() and not ln.startswith("#")]
    N, nnz, constant = (int(t) for t in rows[0])
    if len(rows) - 1 != nnz:
        raise ValueError(f"header declares {nnz} entries, found {len(rows) - 1}")
    return QuboModel.from_entries(N, ((int(i), int(j), int(v)) for i, j, v in rows[1:]), constant)
