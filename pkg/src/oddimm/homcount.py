"""Homomorphism counts and indistinguishability over graph families.

Counts are Python integers, so they never overflow. Parallel edges in either
graph impose the same constraint as a single edge and are collapsed.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from . import canonical
from .errors import BudgetExhausted, GraphError
from .generators import cycle_graph, disjoint_union, path_graph
from .multigraph import MultiGraph
from .twidth import TreeDecomposition, exact_treewidth

DEFAULT_BRUTE_BUDGET = 20_000_000
DEFAULT_TABLE_BUDGET = 5_000_000


def hom_count_bruteforce(f: MultiGraph, g: MultiGraph, budget: int | None = DEFAULT_BRUTE_BUDGET) -> int:
    """Count maps ``V(f) -> V(g)`` sending every edge to an edge, by enumeration."""
    src = sorted(f.vertices)
    dst = sorted(g.vertices)
    if budget is not None and len(dst) ** len(src) > budget:
        raise BudgetExhausted("hom_count_bruteforce", budget)
    index = {v: i for i, v in enumerate(src)}
    pairs = sorted({(index[a], index[b]) for a, b in f.edges.values()})
    adj = g.adjacency()
    count = 0
    for image in product(dst, repeat=len(src)):
        if all(image[j] in adj[image[i]] for i, j in pairs):
            count += 1
    return count


# -- nice tree decompositions ---------------------------------------------------------


@dataclass
class NiceNode:
    """One node of a nice tree decomposition.

    ``kind`` is ``leaf`` (empty bag), ``introduce``/``forget`` (one child,
    bag differs by ``vertex``) or ``join`` (two children with equal bags).
    """

    kind: str
    bag: tuple[int, ...]
    vertex: int | None = None
    children: tuple[NiceNode, ...] = ()


def nice_decomposition(td: TreeDecomposition) -> NiceNode:
    """Nice decomposition with an empty root bag, rooted at the least bag id."""
    tadj = td.tree.adjacency()
    root = min(td.bags)

    def chain_to(node: NiceNode, target: frozenset[int]) -> NiceNode:
        for v in sorted(set(node.bag) - target):
            node = NiceNode("forget", tuple(x for x in node.bag if x != v), v, (node,))
        for v in sorted(target - set(node.bag)):
            node = NiceNode("introduce", tuple(sorted(node.bag + (v,))), v, (node,))
        return node

    def build(x: int, parent: int | None) -> NiceNode:
        bag = td.bags[x]
        subs = [
            chain_to(build(c, x), bag) for c in sorted(tadj[x]) if c != parent
        ]
        if not subs:
            return chain_to(NiceNode("leaf", ()), bag)
        node = subs[0]
        for other in subs[1:]:
            node = NiceNode("join", node.bag, None, (node, other))
        return node

    return chain_to(build(root, None), frozenset())


def _count_nice(node: NiceNode, fadj: dict[int, set[int]], targets: list[int],
                gadj: dict[int, set[int]], limit: int | None) -> dict[tuple[int, ...], int]:
    """Table: images of ``node.bag`` (in bag order) -> number of extensions below."""
    if node.kind == "leaf":
        return {(): 1}
    if node.kind == "join":
        left = _count_nice(node.children[0], fadj, targets, gadj, limit)
        right = _count_nice(node.children[1], fadj, targets, gadj, limit)
        if len(right) < len(left):
            left, right = right, left
        return {k: c * right[k] for k, c in left.items() if k in right}
    child = node.children[0]
    table = _count_nice(child, fadj, targets, gadj, limit)
    v = node.vertex
    if node.kind == "forget":
        at = child.bag.index(v)
        out: dict[tuple[int, ...], int] = {}
        for k, c in table.items():
            key = k[:at] + k[at + 1:]
            out[key] = out.get(key, 0) + c
        return out
    at = node.bag.index(v)
    checks = [i for i, u in enumerate(child.bag) if u in fadj[v]]
    out = {}
    for k, c in table.items():
        for w in targets:
            nb = gadj[w]
            if all(k[i] in nb for i in checks):
                out[k[:at] + (w,) + k[at:]] = c
        if limit is not None and len(out) > limit:
            raise BudgetExhausted("hom_count_td table", limit)
    return out


def hom_count_td(f: MultiGraph, g: MultiGraph, budget: int | None = DEFAULT_TABLE_BUDGET) -> int:
    """Count homomorphisms by dynamic programming over a nice tree decomposition of ``f``.

    ``budget`` bounds the number of entries of any one table.
    """
    if f.num_vertices == 0:
        return 1
    width, td = exact_treewidth(f)
    if budget is not None and g.num_vertices ** (width + 1) > budget:
        raise BudgetExhausted("hom_count_td: source treewidth too large for table budget", budget)
    root = nice_decomposition(td)
    table = _count_nice(root, f.adjacency(), sorted(g.vertices), g.adjacency(), budget)
    return table.get((), 0)


# -- families ---------------------------------------------------------------------------


class FamilyKind(enum.Enum):
    TREES = "trees"
    CYCLES = "cycles"
    PATHS = "paths"
    ALL = "all"
    FILE_LIST = "file-list"


SIZE_CAPS = {FamilyKind.TREES: 10, FamilyKind.PATHS: 10, FamilyKind.ALL: 8}


@dataclass(frozen=True)
class FamilySpec:
    """Family kind plus the largest vertex count to enumerate.

    ``PATHS`` means disjoint unions of paths. ``FILE_LIST`` takes its members
    from ``graphs`` in the given order.
    """

    kind: FamilyKind
    max_size: int
    graphs: tuple[MultiGraph, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))


def _canonical_sorted(graphs: Sequence[MultiGraph]) -> list[MultiGraph]:
    return [canonical.to_multigraph(c) for c in sorted(
        {canonical.canonical_form_of(g) for g in graphs}, key=canonical.order_key)]


def generate_family(fam: FamilySpec) -> Iterator[MultiGraph]:
    """Members up to isomorphism, ordered by vertex count, then canonical form."""
    cap = SIZE_CAPS.get(fam.kind)
    if cap is not None and fam.max_size > cap:
        raise GraphError(f"{fam.kind.value} family is capped at {cap} vertices")
    if fam.kind is FamilyKind.FILE_LIST:
        yield from (g for g in fam.graphs if g.num_vertices <= fam.max_size)
        return
    for n in range(1, fam.max_size + 1):
        if fam.kind is FamilyKind.TREES:
            yield from map(canonical.to_multigraph, canonical.trees(n))
        elif fam.kind is FamilyKind.ALL:
            yield from map(canonical.to_multigraph, canonical.all_graphs(n))
        elif fam.kind is FamilyKind.CYCLES:
            if n >= 3:
                yield cycle_graph(n)
        elif fam.kind is FamilyKind.PATHS:
            unions = [disjoint_union(*(path_graph(k) for k in part))
                      for part in canonical.integer_partitions(n)]
            yield from _canonical_sorted(unions)


def _count_pair(args):
    f, g, h = args
    return hom_count_td(f, g), hom_count_td(f, h)


def distinguish(g: MultiGraph, h: MultiGraph, fam: FamilySpec, jobs: int = 1) -> MultiGraph | None:
    """First family member ``F`` with ``hom(F, g) != hom(F, h)``, or ``None``."""
    members = generate_family(fam)
    if jobs <= 1:
        for f in members:
            if hom_count_td(f, g) != hom_count_td(f, h):
                return f
        return None
    members = list(members)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for f, (a, b) in zip(members, pool.map(_count_pair, [(f, g, h) for f in members])):
            if a != b:
                return f
    return None
