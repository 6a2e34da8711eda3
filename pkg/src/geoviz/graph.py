"""In-memory knowledge-net storage: adjacency, time filter, k-hop extraction.

A Graph is an immutable snapshot built from a validated dataset. Traversal
is undirected (edge direction is kept for display only), so the zoomed-in
neighborhood of a node shows neighbors regardless of which way their edges
point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geoviz import _kernels as kernels
from geoviz.model import Dataset, Entity, EntityId, RelationEdge, TimeSpan

OUT = "out"
IN = "in"


class UnknownEntityError(KeyError):
    def __init__(self, entity_id: EntityId) -> None:
        self.entity_id = entity_id
        super().__init__(entity_id)


class FocusNotVisibleError(ValueError):
    def __init__(self, entity_id: EntityId) -> None:
        self.entity_id = entity_id
        super().__init__(f"focus {entity_id!r} is outside the visible set")


@dataclass(frozen=True)
class Subgraph:
    """A neighborhood extract; ``candidates`` holds discovered (dashed) links."""

    nodes: tuple[EntityId, ...]
    edges: tuple[RelationEdge, ...]
    candidates: tuple = ()
    focus: EntityId = ""


class Graph:
    """Adjacency-indexed snapshot of a dataset.

    ``adjacency`` maps each id to a list of (neighbor, predicate, direction)
    sorted by (neighbor, predicate, direction); an edge a->b is reachable
    from both a and b.
    """

    def __init__(self, dataset: Dataset) -> None:
        self.entities: dict[EntityId, Entity] = {e.id: e for e in dataset.entities}
        self.edges: tuple[RelationEdge, ...] = tuple(
            sorted(dataset.edges, key=lambda e: e.key())
        )
        adjacency: dict[EntityId, list[tuple[str, str, str]]] = {
            eid: [] for eid in self.entities
        }
        for edge in self.edges:
            adjacency[edge.source].append((edge.target, edge.predicate, OUT))
            adjacency[edge.target].append((edge.source, edge.predicate, IN))
        self.adjacency = {eid: sorted(items) for eid, items in adjacency.items()}

        # CSR over sorted ids for the traversal kernel (deduplicated, undirected)
        self._ids: list[EntityId] = sorted(self.entities)
        self._index: dict[EntityId, int] = {eid: i for i, eid in enumerate(self._ids)}
        neighbor_sets: list[set[int]] = [set() for _ in self._ids]
        for edge in self.edges:
            s, t = self._index[edge.source], self._index[edge.target]
            neighbor_sets[s].add(t)
            neighbor_sets[t].add(s)
        counts = [len(s) for s in neighbor_sets]
        self._indptr = np.zeros(len(self._ids) + 1, dtype=np.int64)
        np.cumsum(counts, out=self._indptr[1:])
        self._indices = np.empty(int(self._indptr[-1]), dtype=np.int64)
        for i, nbrs in enumerate(neighbor_sets):
            self._indices[self._indptr[i] : self._indptr[i + 1]] = sorted(nbrs)

        # parallel arrays of timed entities for the overlap kernel
        timed = [e for e in dataset.entities if e.time is not None]
        timed.sort(key=lambda e: (e.time.start, e.time.end, e.id))  # type: ignore[union-attr]
        self._timed_ids: list[EntityId] = [e.id for e in timed]
        self._time_starts = np.array(
            [e.time.start.toordinal() for e in timed], dtype=np.int64  # type: ignore[union-attr]
        )
        self._time_ends = np.array(
            [e.time.end.toordinal() for e in timed], dtype=np.int64  # type: ignore[union-attr]
        )

    def __len__(self) -> int:
        return len(self.entities)

    @property
    def node_count(self) -> int:
        return len(self.entities)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge_between(self, a: EntityId, b: EntityId) -> bool:
        """True when any stored edge connects a and b, in either direction."""
        for neighbor, _, _ in self.adjacency.get(a, ()):
            if neighbor == b:
                return True
        return False


def load(dataset: Dataset) -> Graph:
    return Graph(dataset)


def filter_by_time(g: Graph, time_range: TimeSpan) -> set[EntityId]:
    """Ids of entities whose span overlaps the half-open range; untimed excluded."""
    hits = kernels.overlap_hits(
        g._time_starts,
        g._time_ends,
        time_range.start.toordinal(),
        time_range.end.toordinal(),
    )
    return {g._timed_ids[i] for i in hits}


def khop_subgraph(
    g: Graph,
    focus: EntityId,
    k: int,
    visible: set[EntityId] | None = None,
) -> Subgraph:
    """All entities within k undirected hops of focus, plus induced edges.

    When ``visible`` is given, traversal never leaves it; the focus itself
    must be visible (a filtered-out focus is an error, not a silent
    inclusion).
    """
    if focus not in g.entities:
        raise UnknownEntityError(focus)
    if k < 0:
        raise ValueError("hop count must be >= 0")
    if visible is None:
        allowed = np.ones(len(g._ids), dtype=np.uint8)
    else:
        if focus not in visible:
            raise FocusNotVisibleError(focus)
        allowed = np.zeros(len(g._ids), dtype=np.uint8)
        for eid in visible:
            idx = g._index.get(eid)
            if idx is not None:
                allowed[idx] = 1
    reached = kernels.khop_reach(g._indptr, g._indices, g._index[focus], k, allowed)
    nodes = tuple(g._ids[i] for i in reached)
    node_set = set(nodes)
    edges = tuple(
        e for e in g.edges if e.source in node_set and e.target in node_set
    )
    return Subgraph(nodes=nodes, edges=edges, candidates=(), focus=focus)
