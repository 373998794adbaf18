"""Homomorphism counts that do and do not tell 2K3 from C6 apart.

Run with ``python demos/two_triangles_vs_hexagon.py``.
"""

from __future__ import annotations

from oddimm import FamilyKind, FamilySpec, distinguish, hom_count_td
from oddimm.generators import cycle_graph, from_name


def main() -> None:
    g, h = from_name("2K3"), from_name("C6")
    print("cycle counts hom(C_k, -):")
    for k in range(3, 9):
        c = cycle_graph(k)
        print(f"  C{k}: 2K3={hom_count_td(c, g):>4}  C6={hom_count_td(c, h):>4}")
    for kind, size in [(FamilyKind.TREES, 8), (FamilyKind.PATHS, 8), (FamilyKind.CYCLES, 8), (FamilyKind.ALL, 3)]:
        f = distinguish(g, h, FamilySpec(kind, size))
        if f is None:
            print(f"{kind.value:<7} <= {size}: indistinguishable")
        else:
            edges = sorted(f.edges.values())
            print(f"{kind.value:<7} <= {size}: distinguished by n={f.num_vertices} edges={edges} "
                  f"({hom_count_td(f, g)} vs {hom_count_td(f, h)})")


if __name__ == "__main__":
    main()
