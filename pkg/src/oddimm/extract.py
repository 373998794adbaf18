"""Clique immersion extraction from an oddomorphism.

Given a simple graph with an oddomorphism to ``K_N``, ``N >= C(t,2)(7t+7)``,
the pipeline produces a verified ``K_t`` immersion witness:

1. normalise: delete 2-coloured cycles and split 2-coloured paths of length
   at least 2 between ODD vertices of different colours, until neither exists;
2. split every path of a path decomposition of each 2-coloured forest, drop
   the vertices left isolated (all of them EVEN) and simplify;
3. if the minimum degree is at least ``7t+7``, search the simplified graph
   for ``K_t`` directly and lift the witness back to the input;
4. otherwise some pair ``x, y`` carries ``C(t,2)`` parallel edges. Undo step 2,
   merge ``x`` and ``y`` along the corresponding 2-coloured paths and repeat
   on the smaller graph.

Every transition is checked at runtime: the colouring is re-verified after
each normalising step and merger, and a failed check raises
:class:`PipelineAssertionError` with a dump of the state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .errors import GraphError
from .generators import complete_graph
from .immersion import (
    DEFAULT_IMMERSION_BUDGET,
    ImmersionWitness,
    find_immersion,
    lift_witness,
    verify_immersion,
)
from .multigraph import EdgePath, MultiGraph, forest_path_decomposition, remove_vertices, simplify, split_path
from .oddmorph import (
    ParityClass,
    VertexColouring,
    classify_all,
    delete_bicoloured_cycle,
    merger,
    split_odd_path,
    verify_oddomorphism,
)
from .oplog import OperationLog


def required_colours(t: int) -> int:
    """Number of colours that guarantees a ``K_t`` immersion."""
    if t < 1:
        raise GraphError("t must be positive")
    return comb(t, 2) * (7 * t + 7)


@dataclass
class PipelineState:
    """Current graph and colouring, the log from the input graph, and the
    path pool of every merger (keyed by its log index)."""

    graph: MultiGraph
    colouring: VertexColouring
    log: OperationLog
    pools: dict[int, tuple[EdgePath, ...]] = field(default_factory=dict)

    @classmethod
    def start(cls, g: MultiGraph, f: VertexColouring) -> PipelineState:
        return cls(g.copy(), f, OperationLog(g.copy()))

    def dump(self) -> str:
        g = self.graph
        lines = [
            f"graph: {g.num_vertices} vertices, {g.num_edges} edges",
            "edges: " + " ".join(f"{e}:{a}-{b}" for e, (a, b) in sorted(g.edges.items())),
            "colouring: " + " ".join(f"{v}:{self.colouring[v]}" for v in sorted(g.vertices) if v in self.colouring),
            f"log: {len(self.log)} entries, mergers at {sorted(self.pools)}",
        ]
        return "\n".join(lines)


class PipelineAssertionError(AssertionError):
    """A runtime check of the pipeline failed; ``state`` is where it happened."""

    def __init__(self, message: str, state: PipelineState):
        super().__init__(f"{message}\n{state.dump()}")
        self.state = state


@dataclass
class ExtractionStats:
    depth: int = 0
    mergers: int = 0
    normalize_steps: int = 0
    audits: int = 0
    base_case_fired: bool = False


@dataclass
class ExtractionResult:
    witness: ImmersionWitness
    log: OperationLog
    stats: ExtractionStats


# -- normalisation --------------------------------------------------------------------


def _pair_groups(g: MultiGraph, f: VertexColouring) -> dict[tuple[int, int], list[int]]:
    groups: dict[tuple[int, int], list[int]] = {}
    for e, (a, b) in sorted(g.edges.items()):
        i, j = sorted((f[a], f[b]))
        groups.setdefault((i, j), []).append(e)
    return groups


def _ordered(items, rng: random.Random | None) -> list:
    items = list(items)
    if rng is not None:
        rng.shuffle(items)
    return items


def _tree_path(adj: dict[int, list[tuple[int, int]]], a: int, b: int) -> list[int]:
    """Edge ids along the unique ``a``-``b`` path of a forest."""
    back: dict[int, tuple[int, int] | None] = {a: None}
    queue = [a]
    for x in queue:
        if x == b:
            break
        for y, e in adj.get(x, ()):
            if y not in back:
                back[y] = (x, e)
                queue.append(y)
    out = []
    x = b
    while back[x] is not None:
        x, e = back[x]
        out.append(e)
    return out[::-1]


def find_bicoloured_cycle(
    g: MultiGraph, f: VertexColouring, rng: random.Random | None = None
) -> EdgePath | None:
    """A 2-coloured cycle (closed path), or ``None`` if every pair spans a forest.

    Per colour pair, edges are added in increasing id; the first edge that
    closes a cycle yields it.
    """
    groups = _pair_groups(g, f)
    for key in _ordered(sorted(groups), rng):
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        adj: dict[int, list[tuple[int, int]]] = {}
        for e in _ordered(groups[key], rng):
            a, b = g.endpoints(e)
            ra, rb = find(a), find(b)
            if ra == rb:
                return EdgePath(a, tuple(_tree_path(adj, a, b)) + (e,), a)
            parent[ra] = rb
            adj.setdefault(a, []).append((b, e))
            adj.setdefault(b, []).append((a, e))
    return None


def find_odd_path(
    g: MultiGraph, f: VertexColouring, rng: random.Random | None = None
) -> EdgePath | None:
    """A 2-coloured path of length at least 2 between ODD vertices of
    different colours. Assumes every colour pair spans a forest."""
    parity = classify_all(g, f)
    groups = _pair_groups(g, f)
    for key in _ordered(sorted(groups), rng):
        adj: dict[int, list[tuple[int, int]]] = {}
        for e in groups[key]:
            a, b = g.endpoints(e)
            adj.setdefault(a, []).append((b, e))
            adj.setdefault(b, []).append((a, e))
        odd = sorted(v for v in adj if parity[v] is ParityClass.ODD)
        for s in _ordered(odd, rng):
            dist = {s: 0}
            queue = [s]
            for x in queue:
                for y, _ in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            ends = [v for v in odd if f[v] != f[s] and dist.get(v, 0) >= 2]
            if ends:
                return EdgePath(s, tuple(_tree_path(adj, s, min(ends))), min(ends))
    return None


def _audit(state: PipelineState, stats: ExtractionStats | None, what: str) -> None:
    check = verify_oddomorphism(state.graph, state.colouring)
    if stats is not None:
        stats.audits += 1
    if not check:
        raise PipelineAssertionError(f"oddomorphism lost after {what}: {check.describe()}", state)


def normalize(
    state: PipelineState, stats: ExtractionStats | None = None, rng: random.Random | None = None
) -> PipelineState:
    """Apply cycle deletions, then odd-path splits, until neither applies.

    Lowest ids go first unless ``rng`` shuffles the choices. Each step is
    logged, shrinks the edge count and is followed by a verification.
    """
    g, f = state.graph, state.colouring
    while True:
        cycle = find_bicoloured_cycle(g, f, rng)
        if cycle is not None:
            h = delete_bicoloured_cycle(g, f, cycle, state.log)
            what = f"deleting cycle {cycle.edges}"
        else:
            path = find_odd_path(g, f, rng)
            if path is None:
                return state
            h = split_odd_path(g, f, path, state.log)
            what = f"splitting path {path.edges}"
        if h.num_edges >= g.num_edges:
            raise PipelineAssertionError(f"no progress when {what}", state)
        g = h
        state = PipelineState(g, f, state.log, state.pools)
        if stats is not None:
            stats.normalize_steps += 1
        _audit(state, stats, what)


# -- extraction -----------------------------------------------------------------------


def _direct_witness(g: MultiGraph, t: int) -> ImmersionWitness:
    pattern = complete_graph(t)
    if t == 1:
        if g.num_vertices == 0:
            raise GraphError("K_1 needs a vertex")
        return ImmersionWitness(pattern, g, {1: min(g.vertices)}, {})
    if g.num_edges == 0:
        raise GraphError("K_2 needs an edge")
    e = min(g.edges)
    a, b = g.endpoints(e)
    (pe,) = pattern.edges
    return ImmersionWitness(pattern, g, {1: a, 2: b}, {pe: EdgePath(a, (e,), b)})


def run_extraction(
    g: MultiGraph,
    f: VertexColouring,
    t: int,
    budget: int | None = DEFAULT_IMMERSION_BUDGET,
    rng: random.Random | None = None,
) -> ExtractionResult:
    """Run the pipeline and return the witness on ``g`` with the full log and counters."""
    check = verify_oddomorphism(g, f)
    if not check:
        raise GraphError(f"colouring is not an oddomorphism: {check.describe()}")
    need = required_colours(t)
    if f.t < need:
        raise GraphError(f"K_{t} needs {need} colours, colouring has {f.t}")
    if not g.is_simple():
        raise GraphError("input graph must be simple")
    stats = ExtractionStats()
    if t <= 2:
        w = _direct_witness(g, t)
        return ExtractionResult(w, OperationLog(g.copy()), stats)

    pattern = complete_graph(t)
    bundle = comb(t, 2)
    state = PipelineState.start(g, f)
    while True:
        state = normalize(state, stats, rng)
        cur, col = state.graph, state.colouring

        # Split phase, on a scratch log so it can be discarded before a merger.
        scratch = OperationLog(cur)
        h = cur
        pieces: dict[tuple[int, int], list[EdgePath]] = {}
        for (i, j), es in sorted(_pair_groups(cur, col).items()):
            ends = {x for e in es for x in cur.endpoints(e)}
            for p in forest_path_decomposition(cur.subgraph(ends, es)):
                h = split_path(h, p, scratch)
                pieces.setdefault(tuple(sorted((p.start, p.end))), []).append(p)
        parity = classify_all(cur, col)
        isolated = h.isolated_vertices()
        for v in isolated:
            if parity[v] is not ParityClass.EVEN:
                raise PipelineAssertionError(f"vertex {v} isolated by the split phase but not EVEN", state)
        h = remove_vertices(h, isolated, scratch)
        for v in h.vertices:
            if parity[v] is not ParityClass.ODD:
                raise PipelineAssertionError(f"vertex {v} survives the split phase but is not ODD", state)
            if h.degree(v) < need - 1:
                raise PipelineAssertionError(f"ODD vertex {v} has degree {h.degree(v)} < {need - 1}", state)
        stats.audits += 1
        simple = simplify(h, scratch)

        if simple.num_vertices and simple.min_degree() >= 7 * t + 7:
            stats.base_case_fired = True
            w = find_immersion(simple, pattern, budget)
            if w is None:
                raise PipelineAssertionError(f"no K_{t} immersion in a graph of minimum degree >= {7 * t + 7}", state)
            log = OperationLog(state.log.base, state.log.entries + scratch.entries)
            lifted = lift_witness(w, log, state.pools)
            if not verify_immersion(lifted) or lifted.host != g:
                raise PipelineAssertionError("lifted witness does not verify on the input", state)
            return ExtractionResult(lifted, log, stats)

        mult: dict[tuple[int, int], int] = {}
        for pair in h.edges.values():
            mult[pair] = mult.get(pair, 0) + 1
        heavy = sorted(p for p, k in mult.items() if k >= bundle)
        if not heavy:
            raise PipelineAssertionError(f"minimum degree below {7 * t + 7} but no bundle of {bundle} parallel edges", state)
        x, y = heavy[0]
        if col[x] != col[y]:
            raise PipelineAssertionError(f"bundle {x}-{y} joins different colours", state)
        paths = tuple(pieces[(x, y)][:bundle])
        if len(paths) < bundle:
            raise PipelineAssertionError(f"only {len(paths)} paths behind the {x}-{y} bundle", state)
        merged, col = merger(cur, col, x, y, paths, state.log)
        state.pools[len(state.log) - 1] = paths
        state = PipelineState(merged, col, state.log, state.pools)
        stats.mergers += 1
        stats.depth += 1
        if stats.depth > g.num_vertices:
            raise PipelineAssertionError("recursion deeper than the vertex count", state)
        _audit(state, stats, f"merging {x} and {y}")


def extract_clique_immersion(
    g: MultiGraph, f: VertexColouring, t: int, budget: int | None = DEFAULT_IMMERSION_BUDGET
) -> ImmersionWitness:
    """A verified ``K_t`` immersion witness on ``g``."""
    return run_extraction(g, f, t, budget).witness
