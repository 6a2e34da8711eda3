"""Concept trees: hierarchical temporal and spatial views of a dataset.

Both trees are three levels deep. The temporal tree groups entities by
decade then year (of their span's start); the spatial tree groups by
continent then country. Entities with no usable attribute sit under a
designated "Unknown" child of the root, so each entity appears exactly once
per tree. Empty intermediate nodes are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from geoviz.model import Dataset, Entity, EntityId

TEMPORAL_ROOT_KEY = "ALL"
SPATIAL_ROOT_KEY = "WORLD"
UNKNOWN_KEY = "Unknown"

TEMPORAL = "temporal"
SPATIAL = "spatial"


@dataclass(frozen=True)
class ConceptTreeNode:
    key: str
    level: int
    children: tuple[ConceptTreeNode, ...] = ()
    members: tuple[EntityId, ...] = ()


@dataclass(frozen=True)
class ConceptTree:
    axis: str
    root: ConceptTreeNode


def decade_key(year: int) -> str:
    return f"{(year // 10) * 10}s"


def _temporal_path(e: Entity) -> tuple[str, str] | None:
    if e.time is None:
        return None
    year = e.time.start.year
    return decade_key(year), str(year)


def _spatial_path(e: Entity) -> tuple[str, str] | None:
    if e.region is None or not e.region.known:
        return None
    return e.region.continent, e.region.country  # type: ignore[return-value]


def _build(
    axis: str, root_key: str, d: Dataset, path_of: Callable[[Entity], tuple[str, str] | None]
) -> ConceptTree:
    groups: dict[str, dict[str, list[EntityId]]] = {}
    unknown: list[EntityId] = []
    for e in d.entities:
        path = path_of(e)
        if path is None:
            unknown.append(e.id)
        else:
            level1, level2 = path
            groups.setdefault(level1, {}).setdefault(level2, []).append(e.id)

    children = []
    for level1 in sorted(groups):
        leaves = tuple(
            ConceptTreeNode(level2, 2, (), tuple(sorted(groups[level1][level2])))
            for level2 in sorted(groups[level1])
        )
        children.append(ConceptTreeNode(level1, 1, leaves, ()))
    if unknown:
        children.append(ConceptTreeNode(UNKNOWN_KEY, 1, (), tuple(sorted(unknown))))
    children.sort(key=lambda n: n.key)
    return ConceptTree(axis, ConceptTreeNode(root_key, 0, tuple(children), ()))


def build_temporal_tree(d: Dataset) -> ConceptTree:
    """Timeline -> decade -> year; multi-year spans attach at their start year."""
    return _build(TEMPORAL, TEMPORAL_ROOT_KEY, d, _temporal_path)


def build_spatial_tree(d: Dataset) -> ConceptTree:
    """World -> continent -> country, following each entity's resolved region."""
    return _build(SPATIAL, SPATIAL_ROOT_KEY, d, _spatial_path)


def tree_counts(t: ConceptTree) -> dict[str, int]:
    """Per-node totals: own members plus everything below."""
    counts: dict[str, int] = {}

    def visit(node: ConceptTreeNode) -> int:
        total = len(node.members) + sum(visit(child) for child in node.children)
        counts[node.key] = total
        return total

    visit(t.root)
    return counts


def tree_to_dict(t: ConceptTree) -> dict:
    """Nested {key, level, count, children, members} for API responses."""

    def convert(node: ConceptTreeNode) -> dict:
        converted = [convert(child) for child in node.children]
        count = len(node.members) + sum(c["count"] for c in converted)
        return {
            "key": node.key,
            "level": node.level,
            "count": count,
            "children": converted,
            "members": list(node.members),
        }

    return convert(t.root)
