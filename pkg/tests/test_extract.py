from __future__ import annotations

import random

import networkx as nx
import pytest

from instances import hub_fixture, planted_instance
from oddimm import extract
from oddimm.errors import GraphError
from oddimm.extract import (
    PipelineAssertionError,
    PipelineState,
    find_bicoloured_cycle,
    find_odd_path,
    normalize,
    required_colours,
    run_extraction,
)
from oddimm.generators import complete_bipartite, complete_graph, path_graph
from oddimm.immersion import verify_immersion
from oddimm.multigraph import MultiGraph, bipartite_subgraph
from oddimm.oddmorph import ParityClass, VertexColouring, classify_all, verify_oddomorphism
from oddimm.verdict import invalid


def test_required_colours():
    assert required_colours(1) == 0
    assert required_colours(2) == 21
    assert required_colours(3) == 84
    assert required_colours(4) == 6 * 35
    with pytest.raises(GraphError):
        required_colours(0)


# -- normalisation ----------------------------------------------------------------------


def _is_normalized(g: MultiGraph, f: VertexColouring) -> bool:
    """Independent check: every 2-coloured subgraph is a forest whose components
    never hold ODD vertices of both colours at distance >= 2."""
    parity = classify_all(g, f)
    for i in range(1, f.t + 1):
        for j in range(i + 1, f.t + 1):
            b = bipartite_subgraph(g, f, i, j)
            nxg = nx.MultiGraph()
            nxg.add_nodes_from(b.vertices)
            nxg.add_edges_from(b.edges.values())
            if not nx.is_forest(nxg):
                return False
            dist = dict(nx.all_pairs_shortest_path_length(nxg))
            for a in b.vertices:
                for c in b.vertices:
                    if (
                        f[a] != f[c]
                        and parity[a] is ParityClass.ODD
                        and parity[c] is ParityClass.ODD
                        and dist[a].get(c, 0) >= 2
                    ):
                        return False
    return True


def test_normalized_state_is_left_alone():
    g = complete_graph(6)
    state = normalize(PipelineState.start(g, VertexColouring.identity(g)))
    assert state.graph == g
    assert len(state.log) == 0


def test_normalize_k33():
    g = complete_bipartite(3, 3)
    f = VertexColouring(2, {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 2})
    state = normalize(PipelineState.start(g, f))
    assert verify_oddomorphism(state.graph, f)
    assert _is_normalized(state.graph, f)
    assert all(p is ParityClass.ODD for p in classify_all(state.graph, f).values())
    assert state.log.replay() == state.graph


def test_normalize_path_four():
    g = path_graph(4)
    f = VertexColouring(2, {1: 1, 2: 2, 3: 1, 4: 2})
    state = normalize(PipelineState.start(g, f))
    assert list(state.graph.edges.values()) == [(1, 4)]
    assert state.graph.isolated_vertices() == [2, 3]


def test_finders_on_normalized_graph():
    g = complete_graph(5)
    f = VertexColouring.identity(g)
    assert find_bicoloured_cycle(g, f) is None
    assert find_odd_path(g, f) is None


def test_parallel_pair_is_a_cycle():
    g = MultiGraph.from_edges(2, [(1, 2), (1, 2), (1, 2)])
    f = VertexColouring(2, {1: 1, 2: 2})
    c = find_bicoloured_cycle(g, f)
    assert c is not None and c.edges == (1, 2)


@pytest.mark.parametrize("seed", range(25))
def test_normalize_any_order(seed):
    rng = random.Random(seed)
    g, f = planted_instance(rng, rng.randint(2, 4), max_n=12)
    stats = extract.ExtractionStats()
    state = normalize(PipelineState.start(g, f), stats, rng=random.Random(seed * 7 + 1))
    assert verify_oddomorphism(state.graph, f)
    assert _is_normalized(state.graph, f)
    assert state.log.replay() == state.graph
    # every step removes at least one edge
    assert state.graph.num_edges <= g.num_edges - stats.normalize_steps
    assert stats.audits == stats.normalize_steps


# -- extraction -------------------------------------------------------------------------


def test_direct_cases():
    k1 = MultiGraph.from_edges(1, [])
    w = extract.extract_clique_immersion(k1, VertexColouring.identity(k1), 1)
    assert verify_immersion(w) and w.branch == {1: 1}
    k21 = complete_graph(21)
    w = extract.extract_clique_immersion(k21, VertexColouring.identity(k21), 2)
    assert verify_immersion(w) and w.host == k21


def test_preconditions():
    g = complete_graph(20)
    with pytest.raises(GraphError, match="needs 21 colours"):
        run_extraction(g, VertexColouring.identity(g), 2)
    p = path_graph(3)
    with pytest.raises(GraphError, match="not an oddomorphism"):
        run_extraction(p, VertexColouring(2, {1: 1, 2: 2, 3: 1}), 1)
    multi = MultiGraph.from_edges(2, [(1, 2), (1, 2), (1, 2)])
    with pytest.raises(GraphError, match="simple"):
        run_extraction(multi, VertexColouring(2, {1: 1, 2: 2}), 1)


def test_merger_recursion_depth_two():
    g, f = hub_fixture(5)
    result = run_extraction(g, f, 3)
    assert result.stats.depth == 2 and result.stats.base_case_fired
    assert verify_immersion(result.witness) and result.witness.host == g
    assert result.log.replay().num_vertices < g.num_vertices


def test_planted_instance_with_normalising_steps():
    rng = random.Random(2)
    g, f = planted_instance(rng, 84, max_n=110)
    result = run_extraction(g, f, 3)
    assert result.stats.normalize_steps >= 1
    assert verify_immersion(result.witness) and result.witness.host == g


def test_failed_audit_carries_state(monkeypatch):
    g = complete_bipartite(3, 3)
    f = VertexColouring(2, {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 2})
    monkeypatch.setattr(extract, "verify_oddomorphism", lambda *_: invalid("neither-vertex", vertex=1))
    with pytest.raises(PipelineAssertionError) as info:
        normalize(PipelineState.start(g, f))
    assert info.value.state.graph.num_edges < 9
    assert "colouring:" in str(info.value) and "edges:" in str(info.value)
