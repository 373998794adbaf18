"""Loop-free multigraphs with stable edge identifiers and the edge surgeries
(split-off, path splitting, simplification) that define immersion.

Vertex and edge ids are positive integers. Fresh ids are drawn from counters
that derived graphs inherit, so an id is never reused along a chain of
surgeries and "edge-disjoint" is a plain set-disjointness test on ids.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import FormatError, GraphError
from .oplog import (
    CycleDeleted,
    EdgeRemoved,
    OperationLog,
    SimplifyKept,
    SplitOff,
    VertexRemoved,
)


class MultiGraph:
    """Undirected loop-free multigraph.

    ``edges`` maps each edge id to its endpoint pair ``(u, v)`` with ``u < v``.
    Equality compares vertex sets and edge maps; id counters are ignored.
    """

    __slots__ = ("_inc", "_edges", "_next_vertex", "_next_edge")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Mapping[int, tuple[int, int]] | Iterable[tuple[int, int]] = (),
    ):
        self._inc: dict[int, set[int]] = {}
        self._edges: dict[int, tuple[int, int]] = {}
        self._next_vertex = 1
        self._next_edge = 1
        for v in vertices:
            self._add_vertex(v)
        items = edges.items() if isinstance(edges, Mapping) else enumerate(edges, start=1)
        for e, (u, v) in items:
            for x in (u, v):
                if x not in self._inc:
                    raise GraphError(f"edge {e} uses unknown vertex {x}")
            self._add_edge(u, v, e)

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> MultiGraph:
        """Graph on vertices ``1..n``; edge ids follow the order of ``pairs``."""
        return cls(range(1, n + 1), list(pairs))

    # -- read access ---------------------------------------------------------

    @property
    def vertices(self):
        return self._inc.keys()

    @property
    def edges(self) -> Mapping[int, tuple[int, int]]:
        return MappingProxyType(self._edges)

    @property
    def num_vertices(self) -> int:
        return len(self._inc)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def next_vertex_id(self) -> int:
        return self._next_vertex

    @property
    def next_edge_id(self) -> int:
        return self._next_edge

    def has_vertex(self, v: int) -> bool:
        return v in self._inc

    def has_edge(self, e: int) -> bool:
        return e in self._edges

    def endpoints(self, e: int) -> tuple[int, int]:
        try:
            return self._edges[e]
        except KeyError:
            raise GraphError(f"unknown edge id {e}") from None

    def other(self, e: int, v: int) -> int:
        a, b = self.endpoints(e)
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"edge {e} is not incident to vertex {v}")

    def incident(self, v: int) -> frozenset[int]:
        try:
            return frozenset(self._inc[v])
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        """Number of incident edges, counting parallel edges separately."""
        try:
            return len(self._inc[v])
        except KeyError:
            raise GraphError(f"unknown vertex {v}") from None

    def neighbours(self, v: int) -> set[int]:
        return {self.other(e, v) for e in self.incident(v)}

    def neighbour_multiplicities(self, v: int) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for e in self.incident(v):
            out[self.other(e, v)] += 1
        return dict(out)

    def edges_between(self, u: int, v: int) -> list[int]:
        key = (u, v) if u < v else (v, u)
        return sorted(e for e in self._inc.get(u, ()) if self._edges[e] == key)

    def multiplicity(self, u: int, v: int) -> int:
        return len(self.edges_between(u, v))

    def is_simple(self) -> bool:
        return len(set(self._edges.values())) == len(self._edges)

    def adjacency(self) -> dict[int, set[int]]:
        """Underlying simple graph as a neighbour-set map."""
        adj: dict[int, set[int]] = {v: set() for v in self._inc}
        for u, v in self._edges.values():
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def min_degree(self) -> int:
        return min((len(s) for s in self._inc.values()), default=0)

    def isolated_vertices(self) -> list[int]:
        return sorted(v for v, s in self._inc.items() if not s)

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by least vertex."""
        seen: set[int] = set()
        out = []
        adj = self.adjacency()
        for s in sorted(self._inc):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    # -- copying and equality ------------------------------------------------

    def copy(self) -> MultiGraph:
        g = MultiGraph.__new__(MultiGraph)
        g._inc = {v: set(s) for v, s in self._inc.items()}
        g._edges = dict(self._edges)
        g._next_vertex = self._next_vertex
        g._next_edge = self._next_edge
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._inc.keys() == other._inc.keys() and self._edges == other._edges

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.num_vertices}, m={self.num_edges})"

    def subgraph(self, vertices: Iterable[int], edges: Iterable[int] | None = None) -> MultiGraph:
        """Sub-multigraph on ``vertices``; edges default to all edges inside them.

        Ids are preserved and the id counters are inherited.
        """
        vs = set(vertices)
        for v in vs:
            if v not in self._inc:
                raise GraphError(f"unknown vertex {v}")
        if edges is None:
            es = [e for e, (a, b) in self._edges.items() if a in vs and b in vs]
        else:
            es = list(edges)
        g = MultiGraph.__new__(MultiGraph)
        g._inc = {v: set() for v in sorted(vs)}
        g._edges = {}
        g._next_vertex = self._next_vertex
        g._next_edge = self._next_edge
        for e in sorted(es):
            a, b = self.endpoints(e)
            if a not in vs or b not in vs:
                raise GraphError(f"edge {e} leaves the chosen vertex set")
            g._add_edge(a, b, e)
        return g

    def compact(self) -> tuple[MultiGraph, dict[int, int]]:
        """Relabel to vertices ``1..n`` and edge ids ``1..m`` (in id order)."""
        vmap = {v: i for i, v in enumerate(sorted(self._inc), start=1)}
        pairs = [(vmap[a], vmap[b]) for _, (a, b) in sorted(self._edges.items())]
        return MultiGraph.from_edges(len(vmap), pairs), vmap

    # -- in-place mutators (used by log entries on private working copies) ----

    def _add_vertex(self, v: int | None = None) -> int:
        if v is None:
            v = self._next_vertex
        if not isinstance(v, int) or v < 1:
            raise GraphError(f"vertex ids are positive integers, got {v!r}")
        if v in self._inc:
            raise GraphError(f"vertex {v} already present")
        self._inc[v] = set()
        self._next_vertex = max(self._next_vertex, v + 1)
        return v

    def _add_edge(self, u: int, v: int, e: int | None = None) -> int:
        if u == v:
            raise GraphError(f"loop at vertex {u} is not allowed")
        if u not in self._inc or v not in self._inc:
            raise GraphError(f"edge endpoint ({u}, {v}) not in the vertex set")
        if e is None:
            e = self._next_edge
        if not isinstance(e, int) or e < 1:
            raise GraphError(f"edge ids are positive integers, got {e!r}")
        if e in self._edges:
            raise GraphError(f"edge id {e} already present")
        self._edges[e] = (u, v) if u < v else (v, u)
        self._inc[u].add(e)
        self._inc[v].add(e)
        self._next_edge = max(self._next_edge, e + 1)
        return e

    def _remove_edge(self, e: int) -> None:
        a, b = self.endpoints(e)
        del self._edges[e]
        self._inc[a].discard(e)
        self._inc[b].discard(e)

    def _remove_vertex(self, v: int) -> None:
        if v not in self._inc:
            raise GraphError(f"unknown vertex {v}")
        for e in list(self._inc[v]):
            self._remove_edge(e)
        del self._inc[v]

    def _move_endpoint(self, e: int, old: int, new: int) -> None:
        a, b = self.endpoints(e)
        keep = self.other(e, old)
        if keep == new:
            raise GraphError(f"moving edge {e} would create a loop")
        self._inc[old].discard(e)
        self._inc[new].add(e)
        self._edges[e] = (keep, new) if keep < new else (new, keep)


@dataclass(frozen=True)
class EdgePath:
    """Oriented path given by its edge ids, from ``start`` to ``end``.

    A path never repeats a vertex; a zero-length path has ``start == end``.
    """

    start: int
    edges: tuple[int, ...]
    end: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> EdgePath:
        return EdgePath(self.end, self.edges[::-1], self.start)

    def walk(self, g: MultiGraph) -> list[int]:
        """Vertex sequence of the traversal; raises if it is not a walk in ``g``."""
        if not g.has_vertex(self.start):
            raise GraphError(f"path start {self.start} not in graph")
        seq = [self.start]
        for e in self.edges:
            if not g.has_edge(e):
                raise GraphError(f"path uses missing edge {e}")
            seq.append(g.other(e, seq[-1]))
        if seq[-1] != self.end:
            raise GraphError(f"path ends at {seq[-1]}, expected {self.end}")
        return seq

    def vertices(self, g: MultiGraph) -> list[int]:
        """Vertex sequence; raises unless this is a path (no repeated vertex or edge)."""
        seq = self.walk(g)
        if len(set(seq)) != len(seq):
            raise GraphError("vertex repeated along path")
        return seq

    def is_path_in(self, g: MultiGraph) -> bool:
        try:
            self.vertices(g)
        except GraphError:
            return False
        return True


def shortcut(g: MultiGraph, start: int, edges: Iterable[int]) -> EdgePath:
    """Turn a trail into a path by cutting out every closed sub-walk.

    The result uses a subset of the trail's edges and has the same ends.
    """
    verts = [start]
    out: list[int] = []
    pos = {start: 0}
    for e in edges:
        nxt = g.other(e, verts[-1])
        if nxt in pos:
            k = pos[nxt]
            for x in verts[k + 1:]:
                del pos[x]
            del verts[k + 1:]
            del out[k:]
        else:
            verts.append(nxt)
            out.append(e)
            pos[nxt] = len(verts) - 1
    return EdgePath(start, tuple(out), verts[-1])


# -- surgeries ----------------------------------------------------------------


def split_off(g: MultiGraph, e1: int, e2: int, log: OperationLog | None = None) -> MultiGraph:
    """Replace edges ``uv`` and ``vw`` by a fresh edge ``uw``."""
    a1, b1 = g.endpoints(e1)
    a2, b2 = g.endpoints(e2)
    common = {a1, b1} & {a2, b2}
    if e1 == e2:
        raise GraphError("cannot split an edge with itself")
    if not common:
        raise GraphError(f"edges {e1} and {e2} share no endpoint")
    if len(common) == 2:
        raise GraphError(f"edges {e1} and {e2} are parallel; splitting would create a loop")
    entry = SplitOff(e1, e2, g.next_edge_id)
    h = g.copy()
    entry.apply(h)
    if log is not None:
        log.append(entry)
    return h


def split_path(g: MultiGraph, p: EdgePath, log: OperationLog | None = None) -> MultiGraph:
    """Split off the edges of ``p`` one by one, leaving a single edge between its ends."""
    p.vertices(g)
    if len(p) == 0:
        raise GraphError("cannot split a path of length 0")
    if len(p) == 1:
        return g.copy()
    h = g
    acc = p.edges[0]
    for e in p.edges[1:]:
        h = split_off(h, acc, e, log)
        acc = h.next_edge_id - 1
    return h


def simplify(g: MultiGraph, log: OperationLog | None = None) -> MultiGraph:
    """Keep one edge (the smallest id) per adjacent vertex pair."""
    kept: dict[tuple[int, int], int] = {}
    dropped = []
    for e in sorted(g.edges):
        pair = g.endpoints(e)
        if pair in kept:
            dropped.append(e)
        else:
            kept[pair] = e
    entry = SimplifyKept(kept, tuple(dropped))
    h = g.copy()
    entry.apply(h)
    if log is not None and dropped:
        log.append(entry)
    return h


def delete_edges(g: MultiGraph, edges: Iterable[int], log: OperationLog | None = None) -> MultiGraph:
    h = g.copy()
    for e in edges:
        entry = EdgeRemoved(e)
        entry.apply(h)
        if log is not None:
            log.append(entry)
    return h


def delete_cycle_edges(g: MultiGraph, edges: Iterable[int], log: OperationLog | None = None) -> MultiGraph:
    entry = CycleDeleted(tuple(edges))
    h = g.copy()
    entry.apply(h)
    if log is not None:
        log.append(entry)
    return h


def remove_vertices(g: MultiGraph, vertices: Iterable[int], log: OperationLog | None = None) -> MultiGraph:
    h = g.copy()
    for v in vertices:
        entry = VertexRemoved(v)
        entry.apply(h)
        if log is not None:
            log.append(entry)
    return h


def remove_isolated_vertices(g: MultiGraph, log: OperationLog | None = None) -> MultiGraph:
    return remove_vertices(g, g.isolated_vertices(), log)


def bipartite_subgraph(g: MultiGraph, f, i: int, j: int) -> MultiGraph:
    """Edges with one end coloured ``i`` and the other ``j``, on ``C_i ∪ C_j``."""
    if i == j:
        raise GraphError("colour classes must differ")
    vs = [v for v in g.vertices if f[v] in (i, j)]
    es = [e for e, (a, b) in g.edges.items() if {f[a], f[b]} == {i, j}]
    return g.subgraph(vs, es)


def forest_path_decomposition(g: MultiGraph) -> list[EdgePath]:
    """Partition the edges of a forest into paths whose ends have odd degree.

    Each tree is rooted at its least vertex and processed bottom-up: at every
    vertex the paths arriving from child edges are joined in pairs (lowest edge
    id first) and at most one continues through the parent edge, so a vertex is
    an end of exactly ``deg % 2`` paths.
    """
    if not g.is_simple():
        raise GraphError("parallel edges form a cycle; not a forest")
    parent_edge: dict[int, int | None] = {}
    order: list[int] = []
    for root in sorted(g.vertices):
        if root in parent_edge:
            continue
        parent_edge[root] = None
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for e in sorted(g.incident(x)):
                if e == parent_edge[x]:
                    continue
                y = g.other(e, x)
                if y in parent_edge:
                    raise GraphError("graph contains a cycle; not a forest")
                parent_edge[y] = e
                stack.append(y)

    # open[v]: the path (as an edge list running from its far end towards v)
    # that contains the edge from v to its parent and still ends at v.
    finished: list[EdgePath] = []
    pending: dict[int, tuple[int, list[int]]] = {}
    for v in reversed(order):
        arriving = []
        for e in sorted(g.incident(v)):
            if e == parent_edge[v]:
                continue
            c = g.other(e, v)
            start, edges = pending.pop(c)
            arriving.append((start, edges + [e]))
        pe = parent_edge[v]
        carry = None
        if pe is not None and len(arriving) % 2 == 1:
            carry = arriving.pop()
        elif pe is None and len(arriving) % 2 == 1:
            start, edges = arriving.pop()
            finished.append(EdgePath(start, tuple(edges), v))
        for k in range(0, len(arriving), 2):
            (s1, p1), (s2, p2) = arriving[k], arriving[k + 1]
            finished.append(EdgePath(s1, tuple(p1 + p2[::-1]), s2))
        if pe is not None:
            pending[v] = carry if carry is not None else (v, [])
    return sorted(finished, key=lambda p: min(p.edges))


# -- text format --------------------------------------------------------------


def parse_graph(text: str, source: str = "<string>") -> MultiGraph:
    """Parse ``p graph <n> <m>`` followed by exactly ``m`` lines ``e <u> <v>``."""
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 4 or tok[0] != "p" or tok[1] != "graph":
                raise FormatError("expected header 'p graph <n> <m>'", source, lineno)
            n, m = _ints(tok[2:], source, lineno)
            if n < 0 or m < 0:
                raise FormatError("negative counts in header", source, lineno)
            header = (n, m)
            continue
        if tok[0] != "e" or len(tok) != 3:
            raise FormatError("expected edge line 'e <u> <v>'", source, lineno)
        u, v = _ints(tok[1:], source, lineno)
        n = header[0]
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"vertex id out of range 1..{n}", source, lineno)
        if u == v:
            raise FormatError("loops are not allowed", source, lineno)
        if len(pairs) == header[1]:
            raise FormatError(f"more than the declared {header[1]} edges", source, lineno)
        pairs.append((u, v))
    if header is None:
        raise FormatError("missing 'p graph' header", source)
    if len(pairs) != header[1]:
        raise FormatError(f"declared {header[1]} edges, found {len(pairs)}", source)
    return MultiGraph.from_edges(header[0], pairs)


def format_graph(g: MultiGraph) -> str:
    """Serialize; the graph must use vertices ``1..n`` and edge ids ``1..m``."""
    n, m = g.num_vertices, g.num_edges
    if set(g.vertices) != set(range(1, n + 1)) or set(g.edges) != set(range(1, m + 1)):
        raise GraphError("graph ids are not contiguous; call compact() first")
    lines = [f"p graph {n} {m}"]
    lines += [f"e {u} {v}" for _, (u, v) in sorted(g.edges.items())]
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> MultiGraph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), str(path))


def write_graph(g: MultiGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


def _ints(tokens, source, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", source, lineno) from None
