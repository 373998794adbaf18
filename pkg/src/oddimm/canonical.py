"""Canonical forms and isomorphism-free enumeration of small simple graphs.

Canonical labelling is individualisation-refinement: colour refinement to an
equitable ordered partition, then branching over the first non-singleton cell
and keeping the lexicographically least edge list over all discrete leaves.
Twins (vertices with equal neighbourhoods apart from each other) inside the
branching cell are tried once, since swapping them is an automorphism.
Disconnected graphs are canonicalised component by component.

Graphs are handled as ``(n, edges)`` with vertices ``0..n-1`` and ``edges`` a
sorted tuple of pairs ``(i, j)`` with ``i < j``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .multigraph import MultiGraph

Canon = tuple[int, tuple[tuple[int, int], ...]]


def _refine(adj: list[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition."""
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                key = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(key, []).append(v)
            if len(groups) > 1:
                changed = True
                out.extend(groups[k] for k in sorted(groups))
            else:
                out.append(cell)
        cells = out
        if not changed:
            return cells


def _certificate(adj: list[int], order: list[int]) -> tuple[tuple[int, int], ...]:
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for v in order:
        nb = adj[v]
        while nb:
            low = nb & -nb
            w = low.bit_length() - 1
            nb ^= low
            a, b = pos[v], pos[w]
            if a < b:
                edges.append((a, b))
    return tuple(sorted(edges))


def _canon_connected(adj: list[int], verts: list[int]) -> tuple[tuple[int, int], ...]:
    degree_groups: dict[int, list[int]] = {}
    for v in verts:
        degree_groups.setdefault(adj[v].bit_count(), []).append(v)
    start = _refine(adj, [degree_groups[d] for d in sorted(degree_groups)])
    best: list = [None]

    def search(cells: list[list[int]]) -> None:
        k = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if k is None:
            cert = _certificate(adj, [c[0] for c in cells])
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        tried: list[int] = []
        for v in cells[k]:
            if any((adj[v] & ~(1 << u)) == (adj[u] & ~(1 << v)) for u in tried):
                continue
            tried.append(v)
            rest = [u for u in cells[k] if u != v]
            search(_refine(adj, cells[:k] + [[v], rest] + cells[k + 1:]))

    search(start)
    return best[0]


def canonical_form(n: int, edges) -> Canon:
    """Canonical ``(n, edges)`` of the simple graph on ``0..n-1``."""
    adj = [0] * n
    for a, b in edges:
        if a != b:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        for x in comp:
            nb = adj[x]
            while nb:
                low = nb & -nb
                y = low.bit_length() - 1
                nb ^= low
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
        comps.append((len(comp), _canon_connected(adj, sorted(comp))))
    comps.sort(key=lambda c: (-c[0], c[1]))
    out = []
    offset = 0
    for size, cert in comps:
        out += [(a + offset, b + offset) for a, b in cert]
        offset += size
    return n, tuple(sorted(out))


def canonical_form_of(g: MultiGraph) -> Canon:
    """Canonical form of the underlying simple graph of ``g``."""
    index = {v: i for i, v in enumerate(sorted(g.vertices))}
    return canonical_form(len(index), {(index[a], index[b]) for a, b in g.edges.values()})


def to_multigraph(c: Canon) -> MultiGraph:
    n, edges = c
    return MultiGraph.from_edges(n, [(a + 1, b + 1) for a, b in edges])


def is_isomorphic(g: MultiGraph, h: MultiGraph) -> bool:
    """Isomorphism of the underlying simple graphs."""
    return canonical_form_of(g) == canonical_form_of(h)


def order_key(c: Canon):
    """Deterministic order: vertex count, edge count, then edge list."""
    return (c[0], len(c[1]), c[1])


# -- enumeration ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple[Canon, ...]:
    """Every simple graph on exactly ``n`` vertices, up to isomorphism."""
    if n == 0:
        return ((0, ()),)
    found = set()
    for _, edges in all_graphs(n - 1):
        for mask in range(1 << (n - 1)):
            extra = tuple((i, n - 1) for i in range(n - 1) if mask >> i & 1)
            found.add(canonical_form(n, edges + extra))
    return tuple(sorted(found, key=order_key))


@lru_cache(maxsize=None)
def connected_graphs(n: int) -> tuple[Canon, ...]:
    """Connected simple graphs on ``n >= 1`` vertices, up to isomorphism.

    Every connected graph has a vertex whose removal keeps it connected, so
    extending connected graphs by one vertex with a non-empty neighbourhood
    reaches all of them.
    """
    if n == 1:
        return ((1, ()),)
    found = set()
    for _, edges in connected_graphs(n - 1):
        for mask in range(1, 1 << (n - 1)):
            extra = tuple((i, n - 1) for i in range(n - 1) if mask >> i & 1)
            found.add(canonical_form(n, edges + extra))
    return tuple(sorted(found, key=order_key))


@lru_cache(maxsize=None)
def trees(n: int) -> tuple[Canon, ...]:
    if n == 1:
        return ((1, ()),)
    found = {canonical_form(n, edges + ((i, n - 1),)) for _, edges in trees(n - 1) for i in range(n - 1)}
    return tuple(sorted(found, key=order_key))


@lru_cache(maxsize=None)
def graphs_with_edges(m: int) -> tuple[Canon, ...]:
    """Simple graphs with exactly ``m`` edges and no isolated vertex."""
    if m == 0:
        return ((0, ()),)
    found = set()
    for n, edges in graphs_with_edges(m - 1):
        present = set(edges)
        for a, b in combinations(range(n), 2):
            if (a, b) not in present:
                found.add(canonical_form(n, edges + ((a, b),)))
        for a in range(n):
            found.add(canonical_form(n + 1, edges + ((a, n),)))
        found.add(canonical_form(n + 2, edges + ((n, n + 1),)))
    return tuple(sorted(found, key=order_key))


def integer_partitions(n: int, largest: int | None = None):
    """Partitions of ``n`` as non-increasing tuples, largest parts first."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - k, k):
            yield (k,) + rest
