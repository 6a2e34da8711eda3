"""Core domain types for spatio-temporal knowledge graphs.

Numeric range invariants (latitude/longitude bounds, time-span ordering) are
enforced at construction and raise ``ValueError``. Cross-record invariants
(unique ids, edge endpoints, self-loops, non-empty string fields) are checked
by :func:`validate_dataset`, which reports them as data so ingestion reports
can be exhaustive rather than fail-fast.

All types are immutable values after construction and safe to share across
concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

EntityId = str

MIN_INSTANT = date(1, 1, 1)
MAX_INSTANT = date(9999, 12, 31)


@dataclass(frozen=True)
class TimeSpan:
    """Half-open span of days: ``start`` inclusive, ``end`` exclusive.

    Exclusive ends make year/month spans compose with interval-overlap
    queries without off-by-one ambiguity: the year 2017 is exactly
    [2017-01-01, 2018-01-01).
    """

    start: date
    end: date

    def __post_init__(self) -> None:
        if not isinstance(self.start, date) or not isinstance(self.end, date):
            raise ValueError("time span bounds must be dates")
        if not (MIN_INSTANT <= self.start < self.end <= MAX_INSTANT):
            raise ValueError(f"invalid time span [{self.start}, {self.end})")

    def overlaps(self, other: TimeSpan) -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84-style coordinate; lat in [-90, 90], lon in (-180, 180]."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} out of [-90, 90]")
        if not -180.0 < self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} out of (-180, 180]")


@dataclass(frozen=True)
class RegionPath:
    """Resolved position in the spatial hierarchy; ``None`` means unknown."""

    continent: str | None
    country: str | None

    def __post_init__(self) -> None:
        if self.country is not None and self.continent is None:
            raise ValueError("a known country implies a known continent")

    @property
    def known(self) -> bool:
        return self.country is not None


@dataclass(frozen=True)
class Entity:
    """A knowledge node. ``region`` is derived from ``location`` at ingest."""

    id: EntityId
    label: str
    kind: str
    attributes: dict[str, str] = field(default_factory=dict)
    time: TimeSpan | None = None
    location: GeoPoint | None = None
    region: RegionPath | None = None


@dataclass(frozen=True)
class RelationEdge:
    """A directed labeled edge between two entities."""

    source: EntityId
    target: EntityId
    predicate: str

    def key(self) -> tuple[str, str, str]:
        return (self.source, self.target, self.predicate)


@dataclass(frozen=True)
class Dataset:
    entities: list[Entity]
    edges: list[RelationEdge]


@dataclass(frozen=True)
class Violation:
    """A broken dataset invariant, naming the offending id or field."""

    code: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.code}({self.subject})" + (f": {self.detail}" if self.detail else "")


# violation codes
EMPTY_ID = "empty_id"
DUPLICATE_ID = "duplicate_id"
EMPTY_LABEL = "empty_label"
REGION_WITHOUT_LOCATION = "region_without_location"
SELF_LOOP = "self_loop"
DANGLING_ENDPOINT = "dangling_endpoint"
DUPLICATE_EDGE = "duplicate_edge"
EMPTY_PREDICATE = "empty_predicate"


def validate_dataset(d: Dataset) -> list[Violation]:
    """Collect every invariant violation in ``d``.

    Pure and exhaustive: the same dataset always yields the same list in the
    same order (entities in order, then edges in order). An empty list means
    every downstream module accepts the dataset without error.
    """
    violations: list[Violation] = []
    seen_ids: set[EntityId] = set()
    for e in d.entities:
        if not e.id:
            violations.append(Violation(EMPTY_ID, "<entity>", f"label={e.label!r}"))
        elif e.id in seen_ids:
            violations.append(Violation(DUPLICATE_ID, e.id))
        else:
            seen_ids.add(e.id)
        if not e.label:
            violations.append(Violation(EMPTY_LABEL, e.id))
        if e.region is not None and e.region.known and e.location is None:
            violations.append(Violation(REGION_WITHOUT_LOCATION, e.id))

    seen_edges: set[tuple[str, str, str]] = set()
    for edge in d.edges:
        if not edge.predicate:
            violations.append(Violation(EMPTY_PREDICATE, f"{edge.source}->{edge.target}"))
        if edge.source == edge.target:
            violations.append(Violation(SELF_LOOP, edge.source))
        for endpoint in (edge.source, edge.target):
            if endpoint not in seen_ids:
                violations.append(Violation(DANGLING_ENDPOINT, endpoint))
        if edge.key() in seen_edges:
            violations.append(
                Violation(DUPLICATE_EDGE, f"{edge.source}-[{edge.predicate}]->{edge.target}")
            )
        else:
            seen_edges.add(edge.key())
    return violations
