"""Spatial, temporal, and keyword indexes for knowledge-map queries.

Every query here is defined by set equality with a linear scan over the
dataset; the structures only accelerate. The spatial index is a uniform
1-degree grid (cells gather a candidate superset, an exact containment pass
finishes the job), the temporal index is start-sorted with a binary-search
cutoff, and the text index is a plain inverted index with AND semantics.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from geoviz import _kernels as kernels
from geoviz.graph import Graph
from geoviz.model import Entity, EntityId, TimeSpan


@dataclass(frozen=True)
class BBox:
    """A map viewport. Latitudes are inclusive bounds in [-90, 90].

    Box longitudes live in the closed [-180, 180]; ``min_lon > max_lon``
    means the box crosses the antimeridian. Point longitudes are already
    normalized into (-180, 180], which keeps the +/-180 seam unambiguous.
    """

    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.min_lat <= self.max_lat <= 90.0:
            raise ValueError(f"bad latitude bounds [{self.min_lat}, {self.max_lat}]")
        for lon in (self.min_lon, self.max_lon):
            if not -180.0 <= lon <= 180.0:
                raise ValueError(f"box longitude {lon} out of [-180, 180]")

    @property
    def wraps(self) -> bool:
        return self.min_lon > self.max_lon

    def contains(self, lat: float, lon: float) -> bool:
        if lat < self.min_lat or lat > self.max_lat:
            return False
        if self.wraps:
            return lon >= self.min_lon or lon <= self.max_lon
        return self.min_lon <= lon <= self.max_lon


GLOBAL_BBOX = BBox(-90.0, 90.0, -180.0, 180.0)


def grid_cell(lat: float, lon: float) -> tuple[int, int]:
    """1-degree cell for a point; lon=180 wraps to the -180 edge cell."""
    row = min(int(np.floor(lat)), 89)
    col = int(np.floor(lon))
    if col == 180:
        col = -180
    return row, col


class SpatialIndex:
    """Uniform 1x1 degree grid over located entities."""

    def __init__(self, entities: Iterable[Entity]) -> None:
        cells: dict[tuple[int, int], list[tuple[EntityId, float, float]]] = {}
        count = 0
        for e in entities:
            if e.location is None:
                continue
            count += 1
            cell = grid_cell(e.location.lat, e.location.lon)
            cells.setdefault(cell, []).append((e.id, e.location.lat, e.location.lon))
        self.cells: dict[tuple[int, int], tuple[list[EntityId], np.ndarray, np.ndarray]] = {}
        for cell, items in cells.items():
            items.sort()
            ids = [eid for eid, _, _ in items]
            lats = np.array([lat for _, lat, _ in items], dtype=np.float64)
            lons = np.array([lon for _, _, lon in items], dtype=np.float64)
            self.cells[cell] = (ids, lats, lons)
        self.located_count = count


def _candidate_cols(box: BBox) -> Iterable[int]:
    if box.wraps:
        yield from range(int(np.floor(box.min_lon)), 180)
        yield from range(-180, int(np.floor(box.max_lon)) + 1)
    else:
        lo = max(int(np.floor(box.min_lon)), -180)
        hi = min(int(np.floor(box.max_lon)), 179)
        yield from range(lo, hi + 1)
        if box.max_lon == 180.0:
            yield -180  # points at +180 live in the -180 edge cell


def query_bbox(idx: SpatialIndex, box: BBox) -> set[EntityId]:
    """Exactly the located entities whose point lies in the box."""
    row_lo = max(int(np.floor(box.min_lat)), -90)
    row_hi = min(int(np.floor(box.max_lat)), 89)
    cols = set(_candidate_cols(box))
    if (row_hi - row_lo + 1) * len(cols) > len(idx.cells):
        # wide box: walking populated cells beats enumerating candidates
        entries = [
            entry
            for (row, col), entry in idx.cells.items()
            if row_lo <= row <= row_hi and col in cols
        ]
    else:
        entries = [
            entry
            for row in range(row_lo, row_hi + 1)
            for col in cols
            if (entry := idx.cells.get((row, col))) is not None
        ]
    result: set[EntityId] = set()
    for ids, lats, lons in entries:
        hits = kernels.bbox_hits(
            lats, lons, box.min_lat, box.max_lat, box.min_lon, box.max_lon, box.wraps
        )
        result.update(ids[i] for i in hits)
    return result


class TemporalIndex:
    """Spans sorted by start; queries scan only the start < range.end prefix."""

    def __init__(self, entities: Iterable[Entity]) -> None:
        timed = [
            (e.time.start.toordinal(), e.time.end.toordinal(), e.id)
            for e in entities
            if e.time is not None
        ]
        timed.sort()
        self.ids: list[EntityId] = [eid for _, _, eid in timed]
        self.starts = np.array([s for s, _, _ in timed], dtype=np.int64)
        self.ends = np.array([t for _, t, _ in timed], dtype=np.int64)
        self._start_list = [s for s, _, _ in timed]


def query_overlap(idx: TemporalIndex, time_range: TimeSpan) -> set[EntityId]:
    """Ids with half-open overlap against the range; equals a linear scan."""
    q_start = time_range.start.toordinal()
    q_end = time_range.end.toordinal()
    cut = bisect_left(idx._start_list, q_end)
    hits = kernels.overlap_hits(idx.starts[:cut], idx.ends[:cut], q_start, q_end)
    return {idx.ids[i] for i in hits}


_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs; everything else separates."""
    return _TOKEN_RE.findall(text.lower())


class TextIndex:
    """Inverted index over label, kind, and attribute values."""

    def __init__(self, entities: Iterable[Entity]) -> None:
        postings: dict[str, set[EntityId]] = {}
        all_ids: list[EntityId] = []
        for e in entities:
            all_ids.append(e.id)
            tokens = set(tokenize(e.label)) | set(tokenize(e.kind))
            for value in e.attributes.values():
                tokens.update(tokenize(value))
            for token in tokens:
                postings.setdefault(token, set()).add(e.id)
        self.postings: dict[str, list[EntityId]] = {
            token: sorted(ids) for token, ids in postings.items()
        }
        self.all_ids: list[EntityId] = sorted(all_ids)


def query_keyword(idx: TextIndex, query: str) -> set[EntityId]:
    """AND over query tokens; an empty query matches every entity."""
    tokens = tokenize(query)
    if not tokens:
        return set(idx.all_ids)
    result: set[EntityId] | None = None
    for token in tokens:
        ids = set(idx.postings.get(token, ()))
        result = ids if result is None else result & ids
        if not result:
            return set()
    return result or set()


@dataclass(frozen=True)
class Indexes:
    spatial: SpatialIndex
    temporal: TemporalIndex
    text: TextIndex


def build_indexes(g: Graph) -> Indexes:
    entities = list(g.entities.values())
    return Indexes(SpatialIndex(entities), TemporalIndex(entities), TextIndex(entities))
