"""Oddomorphisms: parity classification, verification, search and the
surgeries that preserve them.

Parity counts use edge multiplicity: the count of ``v`` toward colour ``c`` is
the number of edges from ``v`` into the class ``C_c``. On simple graphs this
is the number of neighbours of that colour.

A vertex with no other colour to look at (``t = 1``, or an isolated target
vertex in the general setting) is classified ``ODD``.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import Budget, FormatError, GraphError
from .multigraph import EdgePath, MultiGraph, _ints, split_path
from .oplog import CycleDeleted, Merger, OperationLog
from .verdict import VALID, Verdict, invalid

DEFAULT_SEARCH_BUDGET = 5_000_000


class ParityClass(enum.Enum):
    ODD = "odd"
    EVEN = "even"
    NEITHER = "neither"


@dataclass(frozen=True)
class VertexColouring:
    """Assignment of colours ``1..t`` to vertices."""

    t: int
    assignment: Mapping[int, int]

    def __post_init__(self):
        if self.t < 1:
            raise GraphError("a colouring needs t >= 1")
        object.__setattr__(self, "assignment", dict(self.assignment))

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def __contains__(self, v: int) -> bool:
        return v in self.assignment

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in range(1, self.t + 1)}
        for v, c in sorted(self.assignment.items()):
            out.setdefault(c, []).append(v)
        return out

    def restrict(self, vertices: Iterable[int]) -> VertexColouring:
        return VertexColouring(self.t, {v: self.assignment[v] for v in vertices})

    def updated(self, drop: Iterable[int] = (), add: Mapping[int, int] | None = None) -> VertexColouring:
        a = dict(self.assignment)
        for v in drop:
            del a[v]
        a.update(add or {})
        return VertexColouring(self.t, a)

    @classmethod
    def identity(cls, g: MultiGraph) -> VertexColouring:
        """Colour ``i`` on vertex ``i`` for a graph on ``1..n``."""
        return cls(g.num_vertices, {v: v for v in g.vertices})


# -- classification ----------------------------------------------------------


def monochromatic_edge(g: MultiGraph, f) -> int | None:
    for e, (a, b) in sorted(g.edges.items()):
        if f[a] == f[b]:
            return e
    return None


def colour_counts(g: MultiGraph, f, v: int) -> dict[int, int]:
    """Number of edges from ``v`` into each colour class."""
    out: dict[int, int] = defaultdict(int)
    for e in g.incident(v):
        out[f[g.other(e, v)]] += 1
    return out


def _parity_of(counts: Iterable[int]) -> ParityClass:
    counts = list(counts)
    if all(c % 2 == 1 for c in counts):
        return ParityClass.ODD
    if all(c % 2 == 0 for c in counts):
        return ParityClass.EVEN
    return ParityClass.NEITHER


def _classify(g: MultiGraph, f: VertexColouring, v: int) -> ParityClass:
    counts = colour_counts(g, f, v)
    own = f[v]
    return _parity_of(counts.get(c, 0) for c in range(1, f.t + 1) if c != own)


def classify_vertex(g: MultiGraph, f: VertexColouring, v: int) -> ParityClass:
    if not g.has_vertex(v):
        raise GraphError(f"unknown vertex {v}")
    e = monochromatic_edge(g, f)
    if e is not None:
        raise GraphError(f"colouring is not proper: edge {e} is monochromatic")
    return _classify(g, f, v)


def classify_all(g: MultiGraph, f: VertexColouring) -> dict[int, ParityClass]:
    """Parity class of every vertex; assumes ``f`` is proper and total."""
    return {v: _classify(g, f, v) for v in sorted(g.vertices)}


def _check_colouring(g: MultiGraph, f: VertexColouring) -> Verdict:
    for v in sorted(g.vertices):
        if v not in f:
            return invalid("uncoloured-vertex", vertex=v)
        if not 1 <= f[v] <= f.t:
            return invalid("colour-out-of-range", vertex=v, colour=f[v])
    e = monochromatic_edge(g, f)
    if e is not None:
        return invalid("improper", edge=e)
    return VALID


def verify_oddomorphism(g: MultiGraph, f: VertexColouring) -> Verdict:
    """Proper, every vertex ODD or EVEN, every class holding an odd number of ODD vertices."""
    check = _check_colouring(g, f)
    if not check:
        return check
    odd_per_class = dict.fromkeys(range(1, f.t + 1), 0)
    for v, p in classify_all(g, f).items():
        if p is ParityClass.NEITHER:
            return invalid("neither-vertex", vertex=v)
        if p is ParityClass.ODD:
            odd_per_class[f[v]] += 1
    for c, k in odd_per_class.items():
        if k % 2 == 0:
            return invalid("even-odd-count", colour=c, odd=k)
    return VALID


# -- general targets -----------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    source: MultiGraph
    target: MultiGraph
    assignment: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def restrict(self, source: MultiGraph) -> Homomorphism:
        return Homomorphism(source, self.target, {v: self.assignment[v] for v in source.vertices})


def verify_homomorphism(hom: Homomorphism) -> Verdict:
    for v in sorted(hom.source.vertices):
        if v not in hom.assignment:
            return invalid("unmapped-vertex", vertex=v)
        if not hom.target.has_vertex(hom.assignment[v]):
            return invalid("unknown-target-vertex", vertex=v, image=hom.assignment[v])
    adj = hom.target.adjacency()
    for e, (a, b) in sorted(hom.source.edges.items()):
        if hom[b] not in adj[hom[a]]:
            return invalid("edge-not-preserved", edge=e)
    return VALID


def _classify_general(hom: Homomorphism, v: int, target_adj: Mapping[int, set[int]]) -> ParityClass:
    counts: dict[int, int] = defaultdict(int)
    for e in hom.source.incident(v):
        counts[hom[hom.source.other(e, v)]] += 1
    return _parity_of(counts.get(w, 0) for w in sorted(target_adj[hom[v]]))


def classify_vertex_general(hom: Homomorphism, v: int) -> ParityClass:
    if not hom.source.has_vertex(v):
        raise GraphError(f"unknown vertex {v}")
    return _classify_general(hom, v, hom.target.adjacency())


def verify_oddomorphism_general(hom: Homomorphism) -> Verdict:
    check = verify_homomorphism(hom)
    if not check:
        return check
    adj = hom.target.adjacency()
    odd_preimages = dict.fromkeys(hom.target.vertices, 0)
    for v in sorted(hom.source.vertices):
        p = _classify_general(hom, v, adj)
        if p is ParityClass.NEITHER:
            return invalid("neither-vertex", vertex=v)
        if p is ParityClass.ODD:
            odd_preimages[hom[v]] += 1
    for w in sorted(odd_preimages):
        if odd_preimages[w] % 2 == 0:
            return invalid("even-odd-count", target=w, odd=odd_preimages[w])
    return VALID


def verify_weak_oddomorphism(hom: Homomorphism, vertices: Iterable[int], edges: Iterable[int]) -> Verdict:
    """Is ``hom`` restricted to the subgraph (``vertices``, ``edges``) an oddomorphism?"""
    sub = hom.source.subgraph(vertices, edges)
    return verify_oddomorphism_general(hom.restrict(sub))


# -- search --------------------------------------------------------------------


def _search_order(g: MultiGraph) -> list[int]:
    order = []
    seen = set()
    adj = g.adjacency()
    for root in sorted(g.vertices):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        for x in queue:
            order.append(x)
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return order


def search_oddomorphism(
    g: MultiGraph, t: int, budget: int | None = DEFAULT_SEARCH_BUDGET
) -> VertexColouring | None:
    """Find a ``t``-oddomorphism of ``g`` or prove there is none.

    Backtracking over vertices in BFS order with colours introduced in
    first-use order. A vertex is classified as soon as it and all its
    neighbours are coloured, and a NEITHER vertex cuts the branch.
    Raises :class:`BudgetExhausted` when more than ``budget`` nodes are visited.
    """
    if t < 1:
        raise GraphError("t must be positive")
    order = _search_order(g)
    n = len(order)
    if n < t:
        return None
    if sum(1 for v in order if g.degree(v) >= t - 1) < t:
        return None  # each class needs an ODD vertex, and ODD vertices have degree >= t-1
    idx = {v: i for i, v in enumerate(order)}
    nbrs = [[(idx[w], m) for w, m in sorted(g.neighbour_multiplicities(v).items())] for v in order]
    colour = [0] * n
    cnt = [[0] * (t + 1) for _ in range(n)]
    remaining = [g.degree(v) for v in order]
    parity: list[ParityClass | None] = [None] * n
    b = Budget(budget, "search_oddomorphism")

    def classify(i: int) -> ParityClass:
        c = colour[i]
        row = cnt[i]
        return _parity_of(row[k] for k in range(1, t + 1) if k != c)

    def solve(pos: int, used: int) -> bool:
        b.tick()
        if pos == n:
            odd = [0] * (t + 1)
            for i in range(n):
                if parity[i] is ParityClass.ODD:
                    odd[colour[i]] += 1
            return all(odd[c] % 2 == 1 for c in range(1, t + 1))
        i = pos
        left = n - pos - 1
        for c in range(1, min(used + 1, t) + 1):
            new_used = max(used, c)
            if left < t - new_used:
                continue
            if any(colour[j] == c for j, _ in nbrs[i]):
                continue
            colour[i] = c
            touched = []
            ok = True
            for j, m in nbrs[i]:
                cnt[j][c] += m
                remaining[j] -= m
            for j, _ in nbrs[i]:
                if colour[j] and remaining[j] == 0 and parity[j] is None:
                    parity[j] = classify(j)
                    touched.append(j)
                    if parity[j] is ParityClass.NEITHER:
                        ok = False
            if ok and remaining[i] == 0:
                parity[i] = classify(i)
                touched.append(i)
                ok = parity[i] is not ParityClass.NEITHER
            if ok and solve(pos + 1, new_used):
                return True
            for j in touched:
                parity[j] = None
            for j, m in nbrs[i]:
                cnt[j][c] -= m
                remaining[j] += m
            colour[i] = 0
        return False

    if not solve(0, 0):
        return None
    return VertexColouring(t, {order[i]: colour[i] for i in range(n)})


# -- surgeries -------------------------------------------------------------------


def _path_colours(g: MultiGraph, f, p: EdgePath) -> set[int]:
    return {f[x] for x in p.vertices(g)}


def merger(
    g: MultiGraph,
    f: VertexColouring,
    u1: int,
    u2: int,
    paths: Iterable[EdgePath] = (),
    log: OperationLog | None = None,
) -> tuple[MultiGraph, VertexColouring]:
    """Identify ``u1`` and ``u2`` into a fresh vertex after deleting ``paths``.

    Each remaining neighbour ``z`` keeps ``|m1 - m2|`` edges to the merged
    vertex, where ``m1``/``m2`` are its multiplicities to ``u1``/``u2``;
    on simple graphs this is the symmetric difference of the neighbourhoods.
    Surviving edges keep their ids.
    """
    for u in (u1, u2):
        if not g.has_vertex(u):
            raise GraphError(f"unknown vertex {u}")
    if u1 == u2:
        raise GraphError("cannot merge a vertex with itself")
    if f[u1] != f[u2]:
        raise GraphError(f"colours differ: f({u1})={f[u1]}, f({u2})={f[u2]}")
    if g.multiplicity(u1, u2):
        raise GraphError(f"{u1} and {u2} are adjacent; merging would create a loop")
    oriented = []
    used: set[int] = set()
    for p in paths:
        if (p.start, p.end) == (u2, u1):
            p = p.reversed()
        if (p.start, p.end) != (u1, u2):
            raise GraphError(f"path {p} does not join {u1} and {u2}")
        if not p.is_path_in(g):
            raise GraphError(f"{p} is not a path in the graph")
        if len(_path_colours(g, f, p)) > 2:
            raise GraphError(f"path {p} is not 2-coloured")
        if used & set(p.edges):
            raise GraphError("paths are not edge-disjoint")
        used |= set(p.edges)
        oriented.append(p)

    deleted = [e for p in oriented for e in p.edges]
    by_side: list[dict[int, list[int]]] = []
    for u in (u1, u2):
        side: dict[int, list[int]] = defaultdict(list)
        for e in sorted(g.incident(u)):
            if e not in used:
                side[g.other(e, u)].append(e)
        by_side.append(side)
    reattached: dict[int, int] = {}
    for z in sorted(set(by_side[0]) | set(by_side[1])):
        s1, s2 = by_side[0].get(z, []), by_side[1].get(z, [])
        k = min(len(s1), len(s2))
        deleted += s1[:k] + s2[:k]
        reattached.update({e: u1 for e in s1[k:]})
        reattached.update({e: u2 for e in s2[k:]})

    entry = Merger(u1, u2, g.next_vertex_id, tuple(oriented), tuple(deleted), reattached)
    h = g.copy()
    entry.apply(h)
    if log is not None:
        log.append(entry)
    return h, f.updated(drop=(u1, u2), add={entry.merged: f[u1]})


def cycle_vertices(g: MultiGraph, c: EdgePath) -> list[int]:
    """Vertex sequence of a closed path (first vertex repeated at the end)."""
    seq = c.walk(g)
    if len(c) < 2 or seq[0] != seq[-1]:
        raise GraphError("not a closed walk of length >= 2")
    if len(set(seq[:-1])) != len(seq) - 1 or len(set(c.edges)) != len(c.edges):
        raise GraphError("closed walk repeats a vertex or edge; not a cycle")
    return seq


def delete_bicoloured_cycle(
    g: MultiGraph, f: VertexColouring, c: EdgePath, log: OperationLog | None = None
) -> MultiGraph:
    """Remove the edges of a cycle that lies between two colour classes."""
    seq = cycle_vertices(g, c)
    pairs = {frozenset((f[a], f[b])) for a, b in zip(seq, seq[1:])}
    if len(pairs) != 1 or len(next(iter(pairs))) != 2:
        raise GraphError("cycle is not 2-coloured")
    entry = CycleDeleted(c.edges)
    h = g.copy()
    entry.apply(h)
    if log is not None:
        log.append(entry)
    return h


def split_odd_path(
    g: MultiGraph, f: VertexColouring, p: EdgePath, log: OperationLog | None = None
) -> MultiGraph:
    """Split a 2-coloured path joining ODD vertices of different colours."""
    seq = p.vertices(g)
    if len(p) < 2:
        raise GraphError("path must have length at least 2")
    if len({f[x] for x in seq}) != 2:
        raise GraphError("path is not 2-coloured")
    if f[p.start] == f[p.end]:
        raise GraphError("path ends have the same colour")
    for x in (p.start, p.end):
        if _classify(g, f, x) is not ParityClass.ODD:
            raise GraphError(f"path end {x} is not ODD")
    return split_path(g, p, log)


# -- text format ---------------------------------------------------------------------


def parse_colouring(text: str, source: str = "<string>") -> VertexColouring:
    """Parse ``p colouring <n> <t>`` followed by one ``c <v> <colour>`` line per vertex."""
    header = None
    assignment: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 4 or tok[:2] != ["p", "colouring"]:
                raise FormatError("expected header 'p colouring <n> <t>'", source, lineno)
            n, t = _ints(tok[2:], source, lineno)
            if n < 0 or t < 1:
                raise FormatError("need n >= 0 and t >= 1", source, lineno)
            header = (n, t)
            continue
        if tok[0] != "c" or len(tok) != 3:
            raise FormatError("expected 'c <v> <colour>'", source, lineno)
        v, c = _ints(tok[1:], source, lineno)
        n, t = header
        if not 1 <= v <= n:
            raise FormatError(f"vertex id out of range 1..{n}", source, lineno)
        if not 1 <= c <= t:
            raise FormatError(f"colour out of range 1..{t}", source, lineno)
        if v in assignment:
            raise FormatError(f"vertex {v} coloured twice", source, lineno)
        assignment[v] = c
    if header is None:
        raise FormatError("missing 'p colouring' header", source)
    if len(assignment) != header[0]:
        raise FormatError(f"declared {header[0]} vertices, coloured {len(assignment)}", source)
    return VertexColouring(header[1], assignment)


def format_colouring(f: VertexColouring) -> str:
    n = len(f.assignment)
    if set(f.assignment) != set(range(1, n + 1)):
        raise GraphError("colouring vertices are not 1..n")
    lines = [f"p colouring {n} {f.t}"] + [f"c {v} {c}" for v, c in sorted(f.assignment.items())]
    return "\n".join(lines) + "\n"


def read_colouring(path: str | Path) -> VertexColouring:
    path = Path(path)
    return parse_colouring(path.read_text(encoding="utf-8"), str(path))


def write_colouring(f: VertexColouring, path: str | Path) -> None:
    Path(path).write_text(format_colouring(f), encoding="utf-8")
