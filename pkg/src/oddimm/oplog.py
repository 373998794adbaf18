"""Reversible trace of graph surgeries.

Every surgery in the package is expressed as an entry whose ``apply`` method
mutates a working copy in place. The public operations build the entry, apply
it to a copy and (optionally) append it to an :class:`OperationLog`, so
replaying a log executes exactly the code that produced the derived graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator

if TYPE_CHECKING:
    from .multigraph import EdgePath, MultiGraph


@dataclass(frozen=True)
class SplitOff:
    e1: int
    e2: int
    new: int

    def apply(self, g: MultiGraph) -> None:
        a1, b1 = g.endpoints(self.e1)
        a2, b2 = g.endpoints(self.e2)
        (v,) = {a1, b1} & {a2, b2}
        u = a1 if b1 == v else b1
        w = a2 if b2 == v else b2
        g._remove_edge(self.e1)
        g._remove_edge(self.e2)
        g._add_edge(u, w, self.new)


@dataclass(frozen=True)
class CycleDeleted:
    edges: tuple[int, ...]

    def apply(self, g: MultiGraph) -> None:
        for e in self.edges:
            g._remove_edge(e)


@dataclass(frozen=True)
class EdgeRemoved:
    edge: int

    def apply(self, g: MultiGraph) -> None:
        g._remove_edge(self.edge)


@dataclass(frozen=True)
class VertexRemoved:
    vertex: int

    def apply(self, g: MultiGraph) -> None:
        g._remove_vertex(self.vertex)


@dataclass(frozen=True)
class SimplifyKept:
    kept: dict[tuple[int, int], int]
    dropped: tuple[int, ...]

    def apply(self, g: MultiGraph) -> None:
        for e in self.dropped:
            g._remove_edge(e)


@dataclass(frozen=True)
class Merger:
    """Identification of ``u1`` and ``u2`` into the fresh vertex ``merged``.

    ``reattached`` maps each surviving edge of u1/u2 to the vertex it was
    incident to before the merge; ``deleted`` holds the path edges plus the
    cancelled pairs to common neighbours.
    """

    u1: int
    u2: int
    merged: int
    paths: tuple[EdgePath, ...]
    deleted: tuple[int, ...]
    reattached: dict[int, int]

    def apply(self, g: MultiGraph) -> None:
        for e in self.deleted:
            g._remove_edge(e)
        g._add_vertex(self.merged)
        for e, old in self.reattached.items():
            g._move_endpoint(e, old, self.merged)
        g._remove_vertex(self.u1)
        g._remove_vertex(self.u2)


Entry = SplitOff | CycleDeleted | EdgeRemoved | VertexRemoved | SimplifyKept | Merger


@dataclass
class OperationLog:
    """Ordered surgeries applied to ``base``."""

    base: MultiGraph
    entries: list[Entry] = field(default_factory=list)

    def append(self, entry: Entry) -> None:
        self.entries.append(entry)

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def replay(self, upto: int | None = None) -> MultiGraph:
        """Graph obtained by applying the first ``upto`` entries to ``base``."""
        g = self.base.copy()
        for entry in self.entries[:upto]:
            entry.apply(g)
        return g

    def to_jsonl(self) -> str:
        return "".join(json.dumps(_entry_to_json(e), sort_keys=True) + "\n" for e in self.entries)


def _entry_to_json(e: Entry) -> dict:
    if isinstance(e, SplitOff):
        return {"op": "split-off", "e1": e.e1, "e2": e.e2, "new": e.new}
    if isinstance(e, CycleDeleted):
        return {"op": "cycle-deleted", "edges": list(e.edges)}
    if isinstance(e, EdgeRemoved):
        return {"op": "edge-removed", "edge": e.edge}
    if isinstance(e, VertexRemoved):
        return {"op": "vertex-removed", "vertex": e.vertex}
    if isinstance(e, SimplifyKept):
        return {
            "op": "simplify",
            "kept": [[u, v, k] for (u, v), k in sorted(e.kept.items())],
            "dropped": list(e.dropped),
        }
    if isinstance(e, Merger):
        return {
            "op": "merger",
            "u1": e.u1,
            "u2": e.u2,
            "merged": e.merged,
            "paths": [[p.start, list(p.edges), p.end] for p in e.paths],
            "deleted": list(e.deleted),
            "reattached": {str(k): v for k, v in sorted(e.reattached.items())},
        }
    raise TypeError(f"unknown log entry {e!r}")
