"""Immersion witnesses: verification, exact search on small hosts, and lifting
a witness back through a log of surgeries.

A witness maps pattern vertices injectively to host vertices and pattern
edges to pairwise edge-disjoint host paths. Routes are paths, never walks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import count
from pathlib import Path
from typing import Mapping, Sequence

from .errors import Budget, FormatError, GraphError
from .multigraph import EdgePath, MultiGraph
from .oplog import Merger, OperationLog, SplitOff
from .verdict import VALID, Verdict, invalid

DEFAULT_IMMERSION_BUDGET = 2_000_000


class LiftError(RuntimeError):
    """A witness could not be carried back through a log."""


@dataclass(frozen=True)
class ImmersionWitness:
    """``routes[e]`` runs from ``branch[a]`` to ``branch[b]`` for pattern edge ``e = (a, b)``."""

    pattern: MultiGraph
    host: MultiGraph
    branch: Mapping[int, int]
    routes: Mapping[int, EdgePath]

    def __post_init__(self):
        object.__setattr__(self, "branch", dict(self.branch))
        routes = {}
        for e, p in sorted(self.routes.items()):
            if self.pattern.has_edge(e):
                a, b = self.pattern.endpoints(e)
                if (p.start, p.end) == (self.branch.get(b), self.branch.get(a)) and p.start != p.end:
                    p = p.reversed()
            routes[e] = p
        object.__setattr__(self, "routes", routes)


def verify_immersion(w: ImmersionWitness) -> Verdict:
    h, g = w.pattern, w.host
    for x in sorted(h.vertices):
        if x not in w.branch:
            return invalid("unmapped-vertex", vertex=x)
        if not g.has_vertex(w.branch[x]):
            return invalid("unknown-host-vertex", vertex=x, image=w.branch[x])
    if len(set(w.branch[x] for x in h.vertices)) != h.num_vertices:
        return invalid("non-injective")
    extra = set(w.routes) - set(h.edges)
    if extra:
        return invalid("extra-route", edge=min(extra))
    used: dict[int, int] = {}
    for e in sorted(h.edges):
        if e not in w.routes:
            return invalid("missing-route", edge=e)
        p = w.routes[e]
        a, b = h.endpoints(e)
        if (p.start, p.end) != (w.branch[a], w.branch[b]):
            return invalid("endpoint-mismatch", edge=e)
        if not p.is_path_in(g):
            return invalid("invalid-path", edge=e)
        for he in p.edges:
            if he in used:
                return invalid("edge-reuse", edge=e, other=used[he], host_edge=he)
            used[he] = e
    return VALID


# -- search -------------------------------------------------------------------------


def _clique_witness(g: MultiGraph, h: MultiGraph) -> ImmersionWitness | None:
    """Greedy search for a ``K_t`` subgraph when ``h`` is a simple complete graph."""
    t = h.num_vertices
    if h.num_edges != t * (t - 1) // 2 or not h.is_simple():
        return None
    adj = g.adjacency()
    for v in sorted(g.vertices):
        if len(adj[v]) < t - 1:
            continue
        clique = [v]
        for u in sorted(adj[v]):
            if len(clique) == t:
                break
            if all(u in adj[c] for c in clique):
                clique.append(u)
        if len(clique) == t:
            branch = dict(zip(sorted(h.vertices), clique))
            routes = {}
            for e, (a, b) in h.edges.items():
                x, y = branch[a], branch[b]
                routes[e] = EdgePath(x, (g.edges_between(x, y)[0],), y)
            return ImmersionWitness(h, g, branch, routes)
    return None


def _distances_to(g: MultiGraph, target: int, used: set[int]) -> dict[int, int]:
    dist = {target: 0}
    queue = [target]
    for x in queue:
        for e in g.incident(x):
            if e in used:
                continue
            y = g.other(e, x)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _paths_of_length(g, s, t, length, used, budget):
    """Simple ``s``-``t`` paths with exactly ``length`` edges avoiding ``used``.

    Among parallel edges only the least free id is tried.
    """
    dist = _distances_to(g, t, used)
    if dist.get(s, length + 1) > length:
        return
    on_path = {s}
    edges: list[int] = []

    def rec(x, left):
        budget.tick()
        if x == t:
            if left == 0:
                yield tuple(edges)
            return
        step: dict[int, int] = {}
        for e in g.incident(x):
            if e in used:
                continue
            y = g.other(e, x)
            if y in on_path or dist.get(y, left) > left - 1:
                continue
            if y not in step or e < step[y]:
                step[y] = e
        for y in sorted(step):
            on_path.add(y)
            edges.append(step[y])
            yield from rec(y, left - 1)
            edges.pop()
            on_path.discard(y)

    yield from rec(s, length)


def _candidate_routes(g, s, t, used, budget):
    """All simple ``s``-``t`` paths avoiding ``used``, shortest first."""
    for length in range(1, g.num_vertices):
        yield from _paths_of_length(g, s, t, length, used, budget)


def _pack_routes(g, h, branch, budget) -> dict[int, EdgePath] | None:
    hdeg = {x: h.degree(x) for x in h.vertices}
    order = sorted(h.edges, key=lambda e: (-(hdeg[h.endpoints(e)[0]] + hdeg[h.endpoints(e)[1]]), e))
    ends_left = {branch[x]: hdeg[x] for x in h.vertices}
    free = {v: g.degree(v) for v in g.vertices}
    used: set[int] = set()
    chosen: dict[int, EdgePath] = {}

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        e = order[k]
        a, b = h.endpoints(e)
        s, t = branch[a], branch[b]
        for route in _candidate_routes(g, s, t, used, budget):
            touched = [x for he in route for x in g.endpoints(he)]
            for x in touched:
                free[x] -= 1
            ends_left[s] -= 1
            ends_left[t] -= 1
            used.update(route)
            if all(free[v] >= n for v, n in ends_left.items()) and rec(k + 1):
                chosen[e] = EdgePath(s, route, t)
                return True
            used.difference_update(route)
            ends_left[s] += 1
            ends_left[t] += 1
            for x in touched:
                free[x] += 1
        return False

    return chosen if rec(0) else None


def find_immersion(
    g: MultiGraph, h: MultiGraph, budget: int | None = DEFAULT_IMMERSION_BUDGET
) -> ImmersionWitness | None:
    """Exact search for an immersion of ``h`` in ``g``.

    Returns a witness, or ``None`` when none exists; raises
    :class:`BudgetExhausted` if the step budget runs out first.
    """
    if h.num_vertices > g.num_vertices:
        return None
    fast = _clique_witness(g, h)
    if fast is not None:
        return fast
    b = Budget(budget, "find_immersion")
    hverts = sorted(h.vertices, key=lambda x: (-h.degree(x), x))
    gverts = sorted(g.vertices)
    branch: dict[int, int] = {}
    taken: set[int] = set()

    def assign(i: int) -> dict[int, EdgePath] | None:
        if i == len(hverts):
            return _pack_routes(g, h, branch, b)
        x = hverts[i]
        need = h.degree(x)
        for v in gverts:
            b.tick()
            if v in taken or g.degree(v) < need:
                continue
            branch[x] = v
            taken.add(v)
            routes = assign(i + 1)
            if routes is not None:
                return routes
            taken.discard(v)
            del branch[x]
        return None

    routes = assign(0)
    if routes is None:
        return None
    return ImmersionWitness(h, g, dict(branch), routes)


# -- lifting --------------------------------------------------------------------------


def _shortcut(verts: list[int], edges: list[int]) -> tuple[list[int], list[int]]:
    out_v = [verts[0]]
    out_e: list[int] = []
    pos = {verts[0]: 0}
    for e, v in zip(edges, verts[1:]):
        if v in pos:
            k = pos[v]
            for x in out_v[k + 1:]:
                del pos[x]
            del out_v[k + 1:]
            del out_e[k:]
        else:
            out_v.append(v)
            out_e.append(e)
            pos[v] = len(out_v) - 1
    return out_v, out_e


def lift_witness(
    w: ImmersionWitness,
    log: OperationLog,
    pools: Mapping[int, Sequence[EdgePath]] | None = None,
) -> ImmersionWitness:
    """Carry a witness on the last graph of ``log`` back to ``log.base``.

    Entries are undone newest first. A route through a split-off edge takes
    the two original edges. A route through a merged vertex passes straight
    through ``u1`` or ``u2`` when both its edges there came from the same
    side, and otherwise splices in an unused path from the merger's pool
    (``pools[i]`` for log entry ``i``, defaulting to the merger's own paths).
    Deletions need no action. Every splice is shortcut back to a path.
    """
    g = log.base.copy()
    split_ends: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {}
    pool_seqs: dict[int, list[tuple[list[int], list[int]]]] = {}
    for i, entry in enumerate(log):
        if isinstance(entry, SplitOff):
            split_ends[i] = (g.endpoints(entry.e1), g.endpoints(entry.e2))
        elif isinstance(entry, Merger):
            chosen = entry.paths if pools is None or i not in pools else pools[i]
            seqs = []
            for p in chosen:
                if (p.start, p.end) == (entry.u2, entry.u1):
                    p = p.reversed()
                if (p.start, p.end) != (entry.u1, entry.u2):
                    raise LiftError(f"pool path for log entry {i} does not join the merged pair")
                seqs.append((p.vertices(g), list(p.edges)))
            pool_seqs[i] = seqs
        entry.apply(g)
    if g != w.host:
        raise LiftError("witness host is not the final graph of the log")
    check = verify_immersion(w)
    if not check:
        raise LiftError(f"witness does not verify on the derived graph: {check.describe()}")

    pattern = w.pattern
    branch = dict(w.branch)
    routes: dict[int, tuple[list[int], list[int]]] = {
        e: (p.vertices(w.host), list(p.edges)) for e, p in w.routes.items()
    }
    for i in range(len(log) - 1, -1, -1):
        entry = log.entries[i]
        if isinstance(entry, SplitOff):
            (a1, b1), (a2, b2) = split_ends[i]
            (mid,) = {a1, b1} & {a2, b2}
            u = a1 if b1 == mid else b1
            for e, (vs, es) in routes.items():
                if entry.new not in es:
                    continue
                k = es.index(entry.new)
                pair = [entry.e1, entry.e2] if vs[k] == u else [entry.e2, entry.e1]
                vs = vs[: k + 1] + [mid] + vs[k + 1:]
                es = es[:k] + pair + es[k + 1:]
                routes[e] = _shortcut(vs, es)
        elif isinstance(entry, Merger):
            routes, branch = _lift_merger(pattern, routes, branch, entry, pool_seqs[i], i)

    lifted = ImmersionWitness(
        pattern,
        log.base,
        branch,
        {e: EdgePath(vs[0], tuple(es), vs[-1]) for e, (vs, es) in routes.items()},
    )
    check = verify_immersion(lifted)
    if not check:
        raise LiftError(f"lifted witness does not verify: {check.describe()}")
    return lifted


def _lift_merger(pattern, routes, branch, entry: Merger, pool, index):
    m = entry.merged
    pool = list(pool)
    side = None
    owner = next((x for x, v in branch.items() if v == m), None)
    if owner is not None:
        votes = {entry.u1: 0, entry.u2: 0}
        for vs, es in routes.values():
            if vs[0] == m:
                votes[entry.reattached[es[0]]] += 1
            elif vs[-1] == m:
                votes[entry.reattached[es[-1]]] += 1
        side = entry.u1 if votes[entry.u1] >= votes[entry.u2] else entry.u2
        branch = {**branch, owner: side}

    def splice(a: int, b: int) -> tuple[list[int], list[int]]:
        if a == b:
            return [a], []
        if not pool:
            raise LiftError(f"merger pool of log entry {index} exhausted")
        vs, es = pool.pop(0)
        if a == entry.u1:
            return list(vs), list(es)
        return vs[::-1], es[::-1]

    out = {}
    for e in sorted(routes):
        vs, es = routes[e]
        if m not in vs:
            out[e] = (vs, es)
            continue
        k = vs.index(m)
        if k == 0:
            sv, se = splice(side, entry.reattached[es[0]])
        elif k == len(vs) - 1:
            sv, se = splice(entry.reattached[es[-1]], side)
        else:
            sv, se = splice(entry.reattached[es[k - 1]], entry.reattached[es[k]])
        vs = vs[:k] + sv + vs[k + 1:]
        es = es[:k] + se + es[k:]
        out[e] = _shortcut(vs, es)
    return out, branch


# -- JSON ----------------------------------------------------------------------------


def witness_to_json(w: ImmersionWitness) -> str:
    doc = {
        "pattern": {
            "vertices": sorted(w.pattern.vertices),
            "edges": {str(e): list(p) for e, p in sorted(w.pattern.edges.items())},
        },
        "branch": {str(x): v for x, v in sorted(w.branch.items())},
        "routes": {str(e): list(p.edges) for e, p in sorted(w.routes.items())},
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def witness_from_json(text: str, host: MultiGraph, source: str = "<string>") -> ImmersionWitness:
    """Rebuild a witness against ``host``; route orientation follows the pattern edge."""
    try:
        doc = json.loads(text)
        pat = doc["pattern"]
        pattern = MultiGraph(
            [int(v) for v in pat["vertices"]],
            {int(e): (int(a), int(b)) for e, (a, b) in pat["edges"].items()},
        )
        branch = {int(x): int(v) for x, v in doc["branch"].items()}
        routes = {}
        for e, ids in doc["routes"].items():
            a, b = pattern.endpoints(int(e))
            routes[int(e)] = EdgePath(branch[a], tuple(int(i) for i in ids), branch[b])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise FormatError(f"malformed witness document ({exc})", source) from None
    return ImmersionWitness(pattern, host, branch, routes)


def read_witness(path: str | Path, host: MultiGraph) -> ImmersionWitness:
    path = Path(path)
    return witness_from_json(path.read_text(encoding="utf-8"), host, str(path))


def write_witness(w: ImmersionWitness, path: str | Path) -> None:
    Path(path).write_text(witness_to_json(w), encoding="utf-8")
