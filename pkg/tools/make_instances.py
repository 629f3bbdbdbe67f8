"""Regenerate the vendored DIMACS instances that have a deterministic construction.

myciel* and queen* follow their textbook definitions.  jean is Knuth's
Les Miserables co-appearance graph (networkx ships it as
``les_miserables_graph``: 77 characters who meet someone) plus the three
characters of jean.dat who never share a chapter with anyone, giving the
80 vertices / 254 edges of the COLOR benchmark.  Vertex numbering differs
from the original files, which leaves every coloring statistic unchanged.

Usage: python tools/make_instances.py [outdir]
"""
import sys
from pathlib import Path

import networkx as nx

from bqpcolor.graph import Graph, mycielski_graph, queen_graph, write_dimacs

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/bqpcolor/data/instances"


def jean() -> Graph:
    lesmis = nx.les_miserables_graph()
    names = sorted(lesmis.nodes)
    label = {name: i + 1 for i, name in enumerate(names)}
    edges = [(label[a], label[b]) for a, b in lesmis.edges]
    return Graph.from_edges(len(names) + 3, edges, name="jean")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    graphs = [(mycielski_graph(k), "Mycielski construction from K2") for k in range(3, 8)]
    graphs += [(queen_graph(k), f"queen moves on a {k}x{k} board") for k in range(5, 9)]
    graphs.append((jean(), "Les Miserables co-appearances (Knuth, jean.dat); vertices 78-80 isolated"))
    for g, how in graphs:
        path = OUT / f"{g.name}.col"
        write_dimacs(g, path, comments=[f"{g.name}: regenerated, {how}"])
        print(f"{path.name}: n={g.vertex_count} m={g.edge_count}")


if __name__ == "__main__":
    main()
