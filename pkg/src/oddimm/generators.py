"""Named test graphs on vertices ``1..n``."""

from __future__ import annotations

from itertools import combinations

from .multigraph import MultiGraph


def empty_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, [])


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> MultiGraph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return MultiGraph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> MultiGraph:
    """Path on ``n`` vertices (``n - 1`` edges)."""
    return MultiGraph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def complete_bipartite(a: int, b: int) -> MultiGraph:
    return MultiGraph.from_edges(
        a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    )


def star_graph(leaves: int) -> MultiGraph:
    return complete_bipartite(1, leaves)


def disjoint_union(*graphs: MultiGraph) -> MultiGraph:
    """Union with vertices and edges renumbered consecutively, in argument order."""
    pairs = []
    offset = 0
    for g in graphs:
        h, vmap = g.compact()
        pairs += [(u + offset, v + offset) for _, (u, v) in sorted(h.edges.items())]
        offset += h.num_vertices
    return MultiGraph.from_edges(offset, pairs)


def parallel_edges(k: int) -> MultiGraph:
    """Two vertices joined by ``k`` parallel edges."""
    return MultiGraph.from_edges(2, [(1, 2)] * k)


def from_name(name: str) -> MultiGraph:
    """Parse names such as ``K5``, ``C6``, ``P4``, ``K3,3``, ``E4`` and ``2K3+K1``."""
    parts = [p.strip() for p in name.replace(" ", "").split("+")]
    out = []
    for part in parts:
        count = 1
        i = 0
        while i < len(part) and part[i].isdigit():
            i += 1
        if i:
            count = int(part[:i])
        body = part[i:]
        kind, args = body[:1].upper(), body[1:]
        if not args:
            raise ValueError(f"cannot parse graph name {name!r}")
        if kind == "K" and "," in args:
            a, b = (int(x) for x in args.split(","))
            g = complete_bipartite(a, b)
        elif kind == "K":
            g = complete_graph(int(args))
        elif kind == "C":
            g = cycle_graph(int(args))
        elif kind == "P":
            g = path_graph(int(args))
        elif kind == "E":
            g = empty_graph(int(args))
        elif kind == "S":
            g = star_graph(int(args))
        else:
            raise ValueError(f"cannot parse graph name {name!r}")
        out += [g] * count
    return disjoint_union(*out)
