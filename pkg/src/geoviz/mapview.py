"""Knowledge-map aggregation: combined filters, marker clusters, timelines.

Filters intersect; absent components contribute the universe. Clustering
partitions located entities into zoom-dependent grid cells. Timeline bins
measure presence: an entity counts in every bin its span overlaps, unlike
the concept tree's single attachment (trees partition, histograms measure).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

from geoviz.graph import Graph, UnknownEntityError
from geoviz.index import BBox, Indexes, query_bbox, query_keyword, query_overlap
from geoviz.model import MAX_INSTANT, Entity, EntityId, RelationEdge, TimeSpan

MAX_CLUSTER_MEMBERS = 25

YEAR = "year"
DECADE = "decade"


@dataclass(frozen=True)
class MapFilter:
    """Conjunctive criteria; all-absent means everything."""

    bbox: BBox | None = None
    time: TimeSpan | None = None
    keyword: str | None = None
    kinds: frozenset[str] | None = None


@dataclass(frozen=True)
class MarkerCluster:
    lat: float
    lon: float
    count: int
    members: tuple[EntityId, ...] | None  # omitted above MAX_CLUSTER_MEMBERS


@dataclass(frozen=True)
class TimelineBin:
    start: date
    end: date  # exclusive
    count: int


def apply_filter(g: Graph, idx: Indexes, f: MapFilter) -> set[EntityId]:
    """Intersection of every present component's result set."""
    result = set(g.entities)
    if f.bbox is not None:
        result &= query_bbox(idx.spatial, f.bbox)
    if f.time is not None:
        result &= query_overlap(idx.temporal, f.time)
    if f.keyword is not None:
        result &= query_keyword(idx.text, f.keyword)
    if f.kinds is not None:
        result &= {eid for eid in result if g.entities[eid].kind in f.kinds}
    return result


def _cluster_cell(lat: float, lon: float, zoom: int) -> tuple[int, int]:
    cells = 1 << zoom
    row = int((lat + 90.0) / (180.0 / cells))
    col = int((lon + 180.0) / (360.0 / cells))
    return min(row, cells - 1), col % cells


def cluster_markers(g: Graph, ids: set[EntityId], zoom: int) -> list[MarkerCluster]:
    """Grid-bin located entities into 2^zoom x 2^zoom cells.

    One cluster per non-empty cell, centered on the arithmetic mean of its
    member coordinates, sorted by (cell row, cell col). Unlocated ids are
    dropped; counts always partition the located input.
    """
    if not 0 <= zoom <= 18:
        raise ValueError(f"zoom {zoom} out of [0, 18]")
    cells: dict[tuple[int, int], list[Entity]] = {}
    for eid in sorted(ids):
        e = g.entities.get(eid)
        if e is None or e.location is None:
            continue
        cells.setdefault(_cluster_cell(e.location.lat, e.location.lon, zoom), []).append(e)
    clusters = []
    for cell in sorted(cells):
        group = cells[cell]
        lat = sum(e.location.lat for e in group) / len(group)  # type: ignore[union-attr]
        lon = sum(e.location.lon for e in group) / len(group)  # type: ignore[union-attr]
        members = tuple(e.id for e in group) if len(group) <= MAX_CLUSTER_MEMBERS else None
        clusters.append(MarkerCluster(lat=lat, lon=lon, count=len(group), members=members))
    return clusters


def _bin_start(year: int, step: int) -> date:
    floored = (year // step) * step
    return date(max(floored, 1), 1, 1)


def timeline_histogram(g: Graph, ids: set[EntityId], granularity: str) -> list[TimelineBin]:
    """Contiguous year or decade bins covering all filtered timed spans.

    Each entity increments every bin its span overlaps; zero-count bins
    between occupied ones are kept so the axis is gapless.
    """
    if granularity == YEAR:
        step = 1
    elif granularity == DECADE:
        step = 10
    else:
        raise ValueError(f"granularity must be 'year' or 'decade', got {granularity!r}")
    spans = [
        g.entities[eid].time
        for eid in ids
        if eid in g.entities and g.entities[eid].time is not None
    ]
    if not spans:
        return []
    first_year = min(s.start.year for s in spans)  # type: ignore[union-attr]
    last_covered = max(s.end for s in spans) - timedelta(days=1)  # type: ignore[union-attr]
    bins = []
    year = (first_year // step) * step
    while True:
        start = _bin_start(year, step)
        next_year = year + step
        end = MAX_INSTANT if next_year > 9999 else date(next_year, 1, 1)
        count = sum(1 for s in spans if s.start < end and start < s.end)  # type: ignore[union-attr]
        bins.append(TimelineBin(start=start, end=end, count=count))
        if end > last_covered or end == MAX_INSTANT:
            break
        year = next_year
    return bins


def entity_detail(g: Graph, entity_id: EntityId) -> tuple[Entity, list[RelationEdge]]:
    """Full entity record plus incident edges sorted by (source, target, predicate)."""
    if entity_id not in g.entities:
        raise UnknownEntityError(entity_id)
    incident = sorted(
        (e for e in g.edges if e.source == entity_id or e.target == entity_id),
        key=lambda e: e.key(),
    )
    return g.entities[entity_id], incident
