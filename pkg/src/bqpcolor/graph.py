"""Undirected simple graphs and the DIMACS ``.col`` text format.

Vertices are numbered ``1..n`` everywhere a user can see them (files,
reports, colorings) and ``0..n-1`` in the adjacency arrays the solvers use.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable


class DimacsError(ValueError):
    """Malformed DIMACS input; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]
    name: str = ""
    declared_edges: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError(f"vertex_count must be positive, got {self.vertex_count}")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (1 <= u < v <= self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) is not a normalized pair in [1, {self.vertex_count}]")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        """Build from 1-based pairs in any orientation; duplicates collapse."""
        normalized = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            normalized.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(normalized), name=name)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """0-based sorted neighbor tuples."""
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u - 1].append(v - 1)
            adj[v - 1].append(u - 1)
        return tuple(tuple(sorted(a)) for a in adj)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Graph({label}n={self.vertex_count}, m={self.edge_count})"


def parse_dimacs(text: str | Iterable[str], name: str = "") -> Graph:
    """Parse DIMACS ``.col`` text (a string or an iterable of lines)."""
    lines = text.splitlines() if isinstance(text, str) else text
    n = None
    declared = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "p":
            if n is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise DimacsError(f"expected 'p edge <n> <m>', got {line!r}", lineno)
            n, declared = _int(tokens[2], lineno), _int(tokens[3], lineno)
            if n < 1:
                raise DimacsError(f"vertex count must be positive, got {n}", lineno)
        elif kind == "e":
            if n is None:
                raise DimacsError("edge line before problem line", lineno)
            if len(tokens) != 3:
                raise DimacsError(f"expected 'e <u> <v>', got {line!r}", lineno)
            u, v = _int(tokens[1], lineno), _int(tokens[2], lineno)
            for w in (u, v):
                if not 1 <= w <= n:
                    raise DimacsError(f"endpoint {w} out of range [1, {n}]", lineno)
            if u == v:
                raise DimacsError(f"self-loop on vertex {u}", lineno)
            edges.add((u, v) if u < v else (v, u))
        else:
            raise DimacsError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise DimacsError("missing problem line")
    return Graph(n, frozenset(edges), name=name, declared_edges=declared)


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DimacsError(f"malformed integer {token!r}", lineno) from None


def read_dimacs(path: str | Path) -> Graph:
    path = Path(path)
    with open(path, encoding="utf-8", errors="replace") as fh:
        return parse_dimacs(fh, name=path.stem)


def to_dimacs(g: Graph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p edge {g.vertex_count} {g.edge_count}")
    out.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(out) + "\n"


def write_dimacs(g: Graph, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(to_dimacs(g, comments), encoding="utf-8")


def degree_stats(g: Graph) -> tuple[int, int]:
    """Return ``(max_degree, edge_count)``."""
    return max(len(a) for a in g.adjacency), g.edge_count


# -- deterministic benchmark families --------------------------------------

def mycielski_graph(order: int) -> Graph:
    """The ``myciel<order>`` benchmark graph (chromatic number ``order + 1``).

    Starts from K2 and applies the Mycielski construction ``order - 1`` times,
    so ``order=3`` gives the 11-vertex Groetzsch graph.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n, edges = 2, {(1, 2)}
    for _ in range(order - 1):
        # shadow of vertex i is n+i, hub is 2n+1
        new = set(edges)
        for u, v in edges:
            new.add((u, n + v))
            new.add((v, n + u))
        hub = 2 * n + 1
        new.update((n + i, hub) for i in range(1, n + 1))
        n, edges = hub, new
    return Graph.from_edges(n, edges, name=f"myciel{order}")


def queen_graph(rows: int, cols: int | None = None) -> Graph:
    """Queen moves on a ``rows x cols`` board; cell (r, c) is vertex ``r*cols + c + 1``."""
    cols = rows if cols is None else cols
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    edges = [
        (a + 1, b + 1)
        for (a, (r1, c1)), (b, (r2, c2)) in combinations(enumerate(cells), 2)
        if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2)
    ]
    return Graph.from_edges(rows * cols, edges, name=f"queen{rows}.{cols}")
