"""Walk through parity classes, the three surgeries and the treewidth bound.

Run with ``python demos/oddomorphisms_and_treewidth.py``.
"""

from __future__ import annotations

from oddimm.generators import complete_bipartite, complete_graph, cycle_graph, path_graph
from oddimm.multigraph import EdgePath, MultiGraph
from oddimm.oddmorph import (
    VertexColouring,
    classify_all,
    delete_bicoloured_cycle,
    merger,
    search_oddomorphism,
    split_odd_path,
    verify_oddomorphism,
)
from oddimm.twidth import exact_treewidth


def show(label, g, f):
    parity = classify_all(g, f)
    classes = " ".join(f"{v}:{f[v]}/{parity[v].name}" for v in sorted(g.vertices))
    print(f"{label:<28} {verify_oddomorphism(g, f).describe():<22} {classes}")


def main() -> None:
    print("== identity colourings of complete graphs")
    for t in range(1, 6):
        g = complete_graph(t)
        print(f"K{t}: {verify_oddomorphism(g, VertexColouring.identity(g)).describe()}")

    print("\n== parity classes")
    p4 = path_graph(4)
    alt = VertexColouring(2, {1: 1, 2: 2, 3: 1, 4: 2})
    show("P4 (1,2,1,2)", p4, alt)
    c6 = cycle_graph(6)
    show("C6 proper 2-colouring", c6, VertexColouring(2, {v: 1 + v % 2 for v in range(1, 7)}))

    print("\n== surgeries keep oddomorphisms")
    three_k2 = MultiGraph.from_edges(6, [(1, 2), (3, 4), (5, 6)])
    bip = VertexColouring(2, {1: 1, 2: 2, 3: 1, 4: 2, 5: 1, 6: 2})
    h, f2 = merger(three_k2, bip, 1, 3)
    show("3K2, merge 1 and 3", h, f2)
    k33 = complete_bipartite(3, 3)
    sides = VertexColouring(2, {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 2})
    show("K3,3 minus a 4-cycle", delete_bicoloured_cycle(k33, sides, EdgePath(1, (1, 4, 5, 2), 1)), sides)
    show("P4 split along 1-2-3-4", split_odd_path(p4, alt, EdgePath(1, (1, 2, 3), 4)), alt)

    print("\n== an oddomorphism onto K_t forces treewidth >= t-1")
    for name, g in [("K5", complete_graph(5)), ("K3,3", k33), ("P4", p4)]:
        width = exact_treewidth(g)[0]
        best = max((t for t in range(1, 6) if search_oddomorphism(g, t)), default=None)
        print(f"{name:<5} treewidth {width}, largest t with a t-oddomorphism: {best}")


if __name__ == "__main__":
    main()
