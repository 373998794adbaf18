from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddimm.errors import FormatError, GraphError
from oddimm.generators import complete_graph, cycle_graph, disjoint_union, from_name, parallel_edges, path_graph
from oddimm.multigraph import (
    EdgePath,
    MultiGraph,
    delete_edges,
    forest_path_decomposition,
    format_graph,
    parse_graph,
    remove_isolated_vertices,
    shortcut,
    simplify,
    split_off,
    split_path,
)
from oddimm.oplog import OperationLog


def test_parallel_edges_keep_distinct_ids():
    g = MultiGraph.from_edges(2, [(1, 2), (2, 1), (1, 2)])
    assert g.edges_between(1, 2) == [1, 2, 3]
    assert g.degree(1) == 3
    assert g.multiplicity(1, 2) == 3
    assert not g.is_simple()
    assert g.neighbours(1) == {2}


def test_loops_rejected():
    with pytest.raises(GraphError):
        MultiGraph.from_edges(2, [(1, 1)])


def test_unknown_endpoint_rejected():
    with pytest.raises(GraphError):
        MultiGraph([1, 2], [(1, 3)])


def test_split_off_creates_fresh_edge():
    g = path_graph(3)
    h = split_off(g, 1, 2)
    assert h.edges == {3: (1, 3)}
    assert g.num_edges == 2  # input untouched
    assert h.degree(2) == 0


def test_split_off_rejects_would_be_loop():
    g = parallel_edges(2)
    with pytest.raises(GraphError):
        split_off(g, 1, 2)


def test_split_off_creates_parallel_edge():
    g = complete_graph(3)  # edges 1:(1,2) 2:(1,3) 3:(2,3)
    h = split_off(g, 1, 3)  # 1-2-3 becomes 1-3
    assert h.multiplicity(1, 3) == 2


def test_split_path_leaves_single_edge_between_ends():
    g = path_graph(5)
    p = EdgePath(1, (1, 2, 3, 4), 5)
    log = OperationLog(g)
    h = split_path(g, p, log)
    assert list(h.edges.values()) == [(1, 5)]
    assert len(log) == 3
    assert log.replay() == h


def test_split_path_of_length_one_is_a_copy():
    g = path_graph(2)
    h = split_path(g, EdgePath(1, (1,), 2))
    assert h == g and h is not g


def test_simplify_keeps_smallest_id():
    g = MultiGraph.from_edges(3, [(1, 2), (2, 3), (1, 2), (2, 3)])
    h = simplify(g)
    assert h.edges == {1: (1, 2), 2: (2, 3)}


def test_subgraph_keeps_ids_and_counters():
    g = complete_graph(4)
    s = g.subgraph([1, 2, 3])
    assert set(s.edges) == {1, 2, 4}
    assert s.next_edge_id == g.next_edge_id
    assert s.next_vertex_id == g.next_vertex_id


def test_compact_relabels_in_order():
    g = remove_isolated_vertices(delete_edges(path_graph(4), [1]))
    h, vmap = g.compact()
    assert vmap == {2: 1, 3: 2, 4: 3}
    assert h.edges == {1: (1, 2), 2: (2, 3)}


def test_components_sorted():
    g = disjoint_union(cycle_graph(3), path_graph(2))
    assert g.components() == [[1, 2, 3], [4, 5]]


def test_edge_path_rejects_repeated_vertex():
    g = cycle_graph(4)
    closed = EdgePath(1, (1, 2, 3, 4), 1)
    assert closed.walk(g) == [1, 2, 3, 4, 1]
    assert not closed.is_path_in(g)
    assert EdgePath(1, (1, 2), 3).is_path_in(g)
    assert not EdgePath(1, (1, 3), 4).is_path_in(g)


def test_shortcut_removes_closed_subwalk():
    g = MultiGraph.from_edges(4, [(1, 2), (2, 3), (3, 2), (2, 4)])
    p = shortcut(g, 1, [1, 2, 3, 4])
    assert p == EdgePath(1, (1, 4), 4)
    assert p.is_path_in(g)


def test_forest_decomposition_of_star():
    g = from_name("K1,3")
    paths = forest_path_decomposition(g)
    assert sorted(len(p) for p in paths) == [1, 2]
    assert sorted(e for p in paths for e in p.edges) == [1, 2, 3]


def test_forest_decomposition_rejects_cycle():
    with pytest.raises(GraphError):
        forest_path_decomposition(cycle_graph(4))
    with pytest.raises(GraphError):
        forest_path_decomposition(parallel_edges(2))


def _random_forest(rng: random.Random, n: int) -> MultiGraph:
    pairs = [(rng.randint(1, v - 1), v) for v in range(2, n + 1) if rng.random() < 0.8]
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return MultiGraph.from_edges(n, [(perm[a - 1], perm[b - 1]) for a, b in pairs])


@pytest.mark.parametrize("seed", range(40))
def test_forest_decomposition_properties(seed):
    g = _random_forest(random.Random(seed), 12)
    paths = forest_path_decomposition(g)
    used = [e for p in paths for e in p.edges]
    assert sorted(used) == sorted(g.edges)
    for p in paths:
        assert p.is_path_in(g)
    ends: dict[int, int] = {}
    for p in paths:
        for x in (p.start, p.end):
            ends[x] = ends.get(x, 0) + 1
    for v in g.vertices:
        assert ends.get(v, 0) == g.degree(v) % 2


# -- file format ----------------------------------------------------------------------


def test_graph_format_round_trip():
    text = "# a comment\np graph 3 3\ne 1 2\ne 2 3\ne 1 2\n"
    g = parse_graph(text)
    assert g.edges_between(1, 2) == [1, 3]
    again = format_graph(g)
    assert again == "p graph 3 3\ne 1 2\ne 2 3\ne 1 2\n"
    assert parse_graph(again) == g


@pytest.mark.parametrize(
    "text, line, needle",
    [
        ("p graph 2 1\n", None, "declared 1 edges"),
        ("p graph 2 1\ne 1 2\ne 1 2\n", 3, "more than"),
        ("p graph 2 1\ne 1 3\n", 2, "out of range"),
        ("p graph 2 1\ne 1 1\n", 2, "loops"),
        ("e 1 2\n", 1, "header"),
        ("p graph 2 x\n", 1, "integers"),
        ("p graph 2 1\nv 1 2\n", 2, "edge line"),
    ],
)
def test_graph_parse_errors(text, line, needle):
    with pytest.raises(FormatError) as info:
        parse_graph(text, "g.txt")
    assert info.value.line == line
    assert needle in str(info.value)
    assert str(info.value).startswith("g.txt")


def test_format_requires_contiguous_ids():
    g = delete_edges(path_graph(3), [1])
    with pytest.raises(GraphError):
        format_graph(g)


# -- log replay ------------------------------------------------------------------------


@st.composite
def surgery_runs(draw):
    n = draw(st.integers(3, 8))
    pairs = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda p: p[0] != p[1]), max_size=14))
    ops = draw(st.lists(st.tuples(st.sampled_from(["split", "delete", "simplify", "isolated"]), st.integers(0, 10**6)), max_size=10))
    return n, pairs, ops


@settings(max_examples=150, deadline=None)
@given(surgery_runs())
def test_log_replay_reproduces_graph(run):
    n, pairs, ops = run
    g = MultiGraph.from_edges(n, pairs)
    log = OperationLog(g.copy())
    h = g
    for kind, seed in ops:
        rng = random.Random(seed)
        if kind == "split":
            options = [
                (e1, e2)
                for v in h.vertices
                for e1 in sorted(h.incident(v))
                for e2 in sorted(h.incident(v))
                if e1 != e2 and h.other(e1, v) != h.other(e2, v)
            ]
            if options:
                h = split_off(h, *rng.choice(options), log)
        elif kind == "delete" and h.num_edges:
            h = delete_edges(h, [rng.choice(sorted(h.edges))], log)
        elif kind == "simplify":
            h = simplify(h, log)
        else:
            h = remove_isolated_vertices(h, log)
    assert log.replay() == h
    assert log.replay(0) == g
