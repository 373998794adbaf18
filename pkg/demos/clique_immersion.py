"""Extract clique immersions, once through the base case and once through mergers.

Run with ``python demos/clique_immersion.py``. Takes a few seconds.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

from oddimm import VertexColouring, required_colours, run_extraction, verify_immersion
from oddimm.generators import complete_graph

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from instances import hub_fixture  # noqa: E402


def run(label, g, f, t):
    start = time.perf_counter()
    result = run_extraction(g, f, t)
    secs = time.perf_counter() - start
    s = result.stats
    print(
        f"{label:<12} n={g.num_vertices:<4} m={g.num_edges:<5} "
        f"mergers={s.mergers} depth={s.depth} audits={s.audits} base_case={s.base_case_fired} "
        f"verified={bool(verify_immersion(result.witness))} ({secs:.1f}s)"
    )
    return result


def main() -> None:
    print(f"colours needed: t=2 -> {required_colours(2)}, t=3 -> {required_colours(3)}")
    k84 = complete_graph(84)
    result = run("K84 identity", k84, VertexColouring.identity(k84), 3)
    for e, route in sorted(result.witness.routes.items()):
        print(f"  pattern edge {e}: {route.start} -> {route.end} via {len(route)} edge(s)")
    for k in (3, 5):
        g, f = hub_fixture(k)
        run(f"{k} hubs", g, f, 3)


if __name__ == "__main__":
    main()
