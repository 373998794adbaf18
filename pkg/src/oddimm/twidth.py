"""Tree decompositions, exact treewidth for small graphs, and the check that
a graph with a ``t``-oddomorphism has treewidth at least ``t - 1``.

Exact treewidth uses the subset recurrence over elimination orderings

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)

where ``Q(S, v)`` is the set of vertices outside ``S ∪ {v}`` reachable from
``v`` through ``S``. States are expanded layer by layer and pruned against a
min-fill upper bound. Parallel edges are ignored throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import Budget, BudgetExhausted, FormatError, GraphError
from .multigraph import MultiGraph, _ints
from .oddmorph import VertexColouring, verify_oddomorphism
from .verdict import VALID, Verdict, invalid

DEFAULT_CAP = 18


@dataclass(frozen=True)
class TreeDecomposition:
    """``tree`` has the bag ids as vertices; ``bags`` maps bag id to vertex set."""

    tree: MultiGraph
    bags: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "bags", {k: frozenset(b) for k, b in self.bags.items()})

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def _is_tree(t: MultiGraph) -> bool:
    if t.num_vertices == 0 or t.num_edges != t.num_vertices - 1 or not t.is_simple():
        return False
    return len(t.components()) == 1


def verify_tree_decomposition(g: MultiGraph, td: TreeDecomposition) -> Verdict:
    """Check covering, edge containment and connected occurrence; reports ``width``."""
    if not _is_tree(td.tree):
        return invalid("not-a-tree")
    if set(td.bags) != set(td.tree.vertices):
        return invalid("bag-tree-mismatch")
    covered: set[int] = set()
    for k in sorted(td.bags):
        extra = td.bags[k] - set(g.vertices)
        if extra:
            return invalid("unknown-vertex", bag=k, vertex=min(extra))
        covered |= td.bags[k]
    missing = set(g.vertices) - covered
    if missing:
        return invalid("vertex-not-covered", vertex=min(missing))
    for e, (a, b) in sorted(g.edges.items()):
        if not any(a in bag and b in bag for bag in td.bags.values()):
            return invalid("edge-not-covered", edge=e)
    tadj = td.tree.adjacency()
    for v in sorted(g.vertices):
        holders = {k for k, bag in td.bags.items() if v in bag}
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            return invalid("disconnected-occurrence", vertex=v)
    return Verdict(True, None, {"width": td.width})


# -- exact treewidth -------------------------------------------------------------


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _min_fill_order(adj: list[int]) -> tuple[int, list[int]]:
    n = len(adj)
    adj = list(adj)
    alive = (1 << n) - 1
    order = []
    width = -1
    for _ in range(n):
        best = None
        for v in _bits(alive):
            nb = adj[v] & alive
            fill = sum((nb & ~adj[u] & ~(1 << u)).bit_count() for u in _bits(nb)) // 2
            if best is None or fill < best[0]:
                best = (fill, v)
        v = best[1]
        nb = adj[v] & alive
        width = max(width, nb.bit_count())
        for u in _bits(nb):
            adj[u] |= nb & ~(1 << u)
        alive &= ~(1 << v)
        order.append(v)
    return width, order


def _exact_order(adj: list[int], budget: Budget) -> tuple[int, list[int]]:
    """Optimal elimination ordering of a small graph given as bitmask rows."""
    n = len(adj)
    ub, ub_order = _min_fill_order(adj)
    full = (1 << n) - 1
    layer: dict[int, int] = {0: -1}
    back: dict[int, int] = {}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for s in sorted(layer):
            tw_s = layer[s]
            for v in _bits(full & ~s):
                budget.tick()
                reach = front = 1 << v
                out = 0
                while front:
                    nb = 0
                    for x in _bits(front):
                        nb |= adj[x]
                    nb &= ~reach
                    reach |= nb
                    out |= nb & ~s
                    front = nb & s
                val = max(tw_s, out.bit_count())
                if val >= ub:
                    continue
                t = s | (1 << v)
                if t not in nxt or val < nxt[t]:
                    nxt[t] = val
                    back[t] = v
        layer = nxt
        if not layer:
            return ub, ub_order
    order = []
    s = full
    while s:
        v = back[s]
        order.append(v)
        s &= ~(1 << v)
    return layer[full], order[::-1]


def decomposition_from_order(adj: Mapping[int, set[int]], order: list[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    work = {v: set(nb) for v, nb in adj.items()}
    bag_of: dict[int, int] = {}
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int | None] = {}
    for i, v in enumerate(order, start=1):
        nb = work.pop(v)
        bags[i] = frozenset(nb | {v})
        bag_of[v] = i
        for u in nb:
            work[u] |= nb - {u}
            work[u].discard(v)
        parent[i] = min(nb, key=pos.__getitem__) if nb else None
    edges = []
    roots = []
    for i, v in enumerate(order, start=1):
        p = parent[i]
        if p is None:
            roots.append(i)
        else:
            edges.append((i, bag_of[p]))
    edges += [(a, b) for a, b in zip(roots, roots[1:])]
    if not bags:
        return TreeDecomposition(MultiGraph([1]), {1: frozenset()})
    return TreeDecomposition(MultiGraph(sorted(bags), edges), bags)


def exact_treewidth(
    g: MultiGraph, budget: int | None = None, cap: int = DEFAULT_CAP
) -> tuple[int, TreeDecomposition]:
    """Treewidth of ``g`` with an optimal decomposition.

    ``cap`` bounds the size of each connected component. The empty graph has
    width -1 (one empty bag).
    """
    b = Budget(budget, "exact_treewidth")
    simple = g.adjacency()
    order: list[int] = []
    width = -1
    for comp in g.components():
        if len(comp) > cap:
            raise BudgetExhausted(f"exact_treewidth component of {len(comp)} vertices over cap", cap)
        index = {v: i for i, v in enumerate(comp)}
        rows = [0] * len(comp)
        for v in comp:
            for u in simple[v]:
                rows[index[v]] |= 1 << index[u]
        w, local = _exact_order(rows, b)
        width = max(width, w)
        order += [comp[i] for i in local]
    return width, decomposition_from_order(simple, order)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of comparing the treewidth against ``t - 1``."""

    holds: bool
    width: int
    t: int
    decomposition: TreeDecomposition

    def __bool__(self) -> bool:
        return self.holds

    @property
    def tight(self) -> bool:
        return self.width == self.t - 1


def check_oddomorphism_treewidth_bound(
    g: MultiGraph, f: VertexColouring, budget: int | None = None, cap: int = DEFAULT_CAP
) -> BoundCheck:
    """Exact treewidth of ``g`` compared with ``f.t - 1``; ``f`` must be an oddomorphism."""
    ok = verify_oddomorphism(g, f)
    if not ok:
        raise GraphError(f"not an oddomorphism: {ok.describe()}")
    width, td = exact_treewidth(g, budget, cap)
    return BoundCheck(width >= f.t - 1, width, f.t, td)


# -- text format -------------------------------------------------------------------


def parse_decomposition(text: str, source: str = "<string>") -> tuple[int, TreeDecomposition]:
    """Parse ``s td <bags> <width+1> <n>``, ``b <id> <v...>`` and ``e <b1> <b2>`` lines.

    Returns the declared number of graph vertices and the decomposition.
    """
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.split()[0] == "c":
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 5 or tok[:2] != ["s", "td"]:
                raise FormatError("expected header 's td <bags> <width+1> <n>'", source, lineno)
            header = _ints(tok[2:], source, lineno)
            continue
        if tok[0] == "b" and len(tok) >= 2:
            nums = _ints(tok[1:], source, lineno)
            k, members = nums[0], nums[1:]
            if not 1 <= k <= header[0]:
                raise FormatError(f"bag id out of range 1..{header[0]}", source, lineno)
            if k in bags:
                raise FormatError(f"bag {k} listed twice", source, lineno)
            if any(not 1 <= v <= header[2] for v in members) or len(set(members)) != len(members):
                raise FormatError("bag vertices out of range or repeated", source, lineno)
            bags[k] = frozenset(members)
        elif tok[0] == "e" and len(tok) == 3:
            a, b = _ints(tok[1:], source, lineno)
            if not (1 <= a <= header[0] and 1 <= b <= header[0]) or a == b:
                raise FormatError("tree edge uses an invalid bag id", source, lineno)
            edges.append((a, b))
        else:
            raise FormatError("expected 'b' or 'e' line", source, lineno)
    if header is None:
        raise FormatError("missing 's td' header", source)
    nbags, size, n = header
    if len(bags) != nbags:
        raise FormatError(f"declared {nbags} bags, found {len(bags)}", source)
    if len(edges) != nbags - 1:
        raise FormatError(f"a tree on {nbags} bags needs {nbags - 1} edges, found {len(edges)}", source)
    if max((len(b) for b in bags.values()), default=0) != size:
        raise FormatError("declared width+1 does not match the largest bag", source)
    return n, TreeDecomposition(MultiGraph(range(1, nbags + 1), edges), bags)


def format_decomposition(td: TreeDecomposition, n: int) -> str:
    keys = sorted(td.bags)
    if keys != list(range(1, len(keys) + 1)):
        raise GraphError("bag ids are not 1..k")
    lines = [f"s td {len(keys)} {td.width + 1} {n}"]
    lines += [" ".join(["b", str(k)] + [str(v) for v in sorted(td.bags[k])]) for k in keys]
    lines += [f"e {a} {b}" for _, (a, b) in sorted(td.tree.edges.items())]
    return "\n".join(lines) + "\n"


def read_decomposition(path: str | Path) -> tuple[int, TreeDecomposition]:
    path = Path(path)
    return parse_decomposition(path.read_text(encoding="utf-8"), str(path))


def write_decomposition(td: TreeDecomposition, n: int, path: str | Path) -> None:
    Path(path).write_text(format_decomposition(td, n), encoding="utf-8")
