"""Dataset ingestion: NDJSON parsing plus temporal/spatial normalization.

The on-disk format is newline-delimited JSON (UTF-8), one record per line:

    {"type":"entity","id":"...","label":"...","kind":"...",
     "time":"2017-06-24","lat":"30.88","lon":"101.89",
     "country":"CN","attrs":{"...":"..."}}
    {"type":"edge","source":"...","target":"...","predicate":"..."}

``time``, ``lat``/``lon``, ``country`` and ``attrs`` are optional; ``lat``
and ``lon`` must appear together, and ``country`` (an explicit override of
geometric region resolution) requires a location. Unknown keys are rejected
unless ``lenient`` is set.

Temporal values accept ``YYYY``, ``YYYY-MM``, ``YYYY-MM-DD`` and ``A/B``
intervals of those forms; each normalizes to the minimal covering half-open
span. The grammar is this module's definition of normalization; the
proleptic Gregorian calendar (UTC, no time zones) is assumed throughout.

Ingestion is all-or-nothing per file: any issue yields an exhaustive
:class:`IngestReport` and no dataset.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from datetime import date, timedelta
from typing import IO

from geoviz.model import (
    Dataset,
    Entity,
    GeoPoint,
    RegionPath,
    RelationEdge,
    TimeSpan,
    validate_dataset,
)
from geoviz.regions import CountryExtents, resolve_region


class TimeFormatError(ValueError):
    """Raw temporal value outside the supported grammar."""

    def __init__(self, raw: str, reason: str = "") -> None:
        self.raw = raw
        self.reason = reason
        super().__init__(f"bad time value {raw!r}" + (f": {reason}" if reason else ""))


class SpaceFormatError(ValueError):
    """Raw coordinate value that does not parse as decimal degrees."""


class LatOutOfRangeError(ValueError):
    """Latitude outside [-90, 90]."""


@dataclass(frozen=True)
class IngestIssue:
    """One problem found during ingest; line 0 marks dataset-level issues."""

    line: int
    code: str
    detail: str

    def to_dict(self) -> dict:
        return {"line": self.line, "code": self.code, "detail": self.detail}


@dataclass(frozen=True)
class IngestReport:
    issues: tuple[IngestIssue, ...]
    entities: int
    edges: int

    @property
    def ok(self) -> bool:
        return not self.issues

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "entities": self.entities,
            "edges": self.edges,
            "issues": [i.to_dict() for i in self.issues],
        }

    def summary(self) -> str:
        if self.ok:
            return f"ok: {self.entities} entities, {self.edges} edges"
        lines = [f"{len(self.issues)} issue(s):"]
        for issue in self.issues:
            where = f"line {issue.line}" if issue.line else "dataset"
            lines.append(f"  {where}: {issue.code}: {issue.detail}")
        return "\n".join(lines)


class IngestError(Exception):
    """Raised by parse_dataset when the source has any issue."""

    def __init__(self, report: IngestReport) -> None:
        self.report = report
        super().__init__(report.summary())


# --- temporal normalization -------------------------------------------------

_YEAR_RE = re.compile(r"^(\d{4})$")
_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")
_DAY_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")


def _unit_span(raw: str) -> TimeSpan:
    m = _YEAR_RE.match(raw)
    if m:
        year = int(m.group(1))
        if year == 0:
            raise TimeFormatError(raw, "year 0 does not exist")
        if year == 9999:
            raise TimeFormatError(raw, "exclusive end would leave the calendar")
        return TimeSpan(date(year, 1, 1), date(year + 1, 1, 1))
    m = _MONTH_RE.match(raw)
    if m:
        year, month = int(m.group(1)), int(m.group(2))
        if year == 0:
            raise TimeFormatError(raw, "year 0 does not exist")
        if not 1 <= month <= 12:
            raise TimeFormatError(raw, f"month {month} out of range")
        if year == 9999 and month == 12:
            raise TimeFormatError(raw, "exclusive end would leave the calendar")
        if month == 12:
            end = date(year + 1, 1, 1)
        else:
            end = date(year, month + 1, 1)
        return TimeSpan(date(year, month, 1), end)
    m = _DAY_RE.match(raw)
    if m:
        year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
        try:
            start = date(year, month, day)
        except ValueError as exc:
            raise TimeFormatError(raw, str(exc)) from exc
        try:
            end = start + timedelta(days=1)
        except OverflowError as exc:
            raise TimeFormatError(raw, "exclusive end would leave the calendar") from exc
        return TimeSpan(start, end)
    raise TimeFormatError(raw, "expected YYYY, YYYY-MM, YYYY-MM-DD, or A/B interval")


def normalize_time(raw: str) -> TimeSpan:
    """Normalize a raw temporal value to its minimal covering span.

    Intervals ``A/B`` span from the start of A to the (exclusive) end of B
    and must be in order: A may not start or end after B does.
    """
    if not raw:
        raise TimeFormatError(raw, "empty value")
    if "/" in raw:
        parts = raw.split("/")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise TimeFormatError(raw, "interval must be A/B")
        a = _unit_span(parts[0])
        b = _unit_span(parts[1])
        if a.start > b.start or a.end > b.end:
            raise TimeFormatError(raw, "reversed interval")
        return TimeSpan(a.start, b.end)
    return _unit_span(raw)


def format_time(span: TimeSpan) -> str:
    """Render a span back into the ingest grammar.

    Inverse of :func:`normalize_time` up to span equality: re-normalizing
    the output always yields ``span``.
    """
    start_unit, start_str = _largest_start_unit(span)
    if start_unit.end == span.end:
        return start_str
    return f"{start_str}/{_largest_end_unit(span)}"


def _largest_start_unit(span: TimeSpan) -> tuple[TimeSpan, str]:
    """Largest grammar unit anchored at span.start that stays inside span."""
    s = span.start
    if s.month == 1 and s.day == 1 and s.year <= 9998:
        unit = TimeSpan(s, date(s.year + 1, 1, 1))
        if unit.end <= span.end:
            return unit, f"{s.year:04d}"
    if s.day == 1 and not (s.year == 9999 and s.month == 12):
        end = date(s.year + 1, 1, 1) if s.month == 12 else date(s.year, s.month + 1, 1)
        unit = TimeSpan(s, end)
        if unit.end <= span.end:
            return unit, f"{s.year:04d}-{s.month:02d}"
    return TimeSpan(s, s + timedelta(days=1)), f"{s.year:04d}-{s.month:02d}-{s.day:02d}"


def _largest_end_unit(span: TimeSpan) -> str:
    """Largest grammar unit ending exactly at span.end, within the span."""
    e = span.end
    if e.month == 1 and e.day == 1:
        if date(e.year - 1, 1, 1) >= span.start:
            return f"{e.year - 1:04d}"
    if e.day == 1:
        prev = date(e.year - 1, 12, 1) if e.month == 1 else date(e.year, e.month - 1, 1)
        if prev >= span.start:
            return f"{prev.year:04d}-{prev.month:02d}"
    d = e - timedelta(days=1)
    return f"{d.year:04d}-{d.month:02d}-{d.day:02d}"


# --- spatial normalization ---------------------------------------------------


def normalize_lon(lon: float) -> float:
    """Shift a longitude by multiples of 360 into (-180, 180]."""
    r = lon % 360.0
    if r > 180.0:
        r -= 360.0
    return r


def normalize_space(raw_lat: str, raw_lon: str) -> GeoPoint:
    try:
        lat = float(raw_lat)
        lon = float(raw_lon)
    except (TypeError, ValueError) as exc:
        raise SpaceFormatError(f"not decimal degrees: ({raw_lat!r}, {raw_lon!r})") from exc
    if not (math.isfinite(lat) and math.isfinite(lon)):
        raise SpaceFormatError(f"non-finite degrees: ({raw_lat!r}, {raw_lon!r})")
    if not -90.0 <= lat <= 90.0:
        raise LatOutOfRangeError(f"latitude {lat} out of [-90, 90]")
    return GeoPoint(lat, normalize_lon(lon))


# --- NDJSON parsing ----------------------------------------------------------

_ENTITY_REQUIRED = ("type", "id", "label", "kind")
_ENTITY_OPTIONAL = ("time", "lat", "lon", "country", "attrs")
_EDGE_REQUIRED = ("type", "source", "target", "predicate")

PARSE_ERROR = "parse_error"
TIME_FORMAT = "time_format"
SPACE_FORMAT = "space_format"
LAT_OUT_OF_RANGE = "lat_out_of_range"
UNKNOWN_COUNTRY = "unknown_country"


def _read_lines(source: bytes | str | IO) -> list[str]:
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    return text.split("\n")


def _parse_entity(obj: dict, line_no: int, lenient: bool, issues: list[IngestIssue]) -> Entity | None:
    before = len(issues)
    for key in _ENTITY_REQUIRED:
        if key not in obj:
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"missing key {key!r}"))
    if not lenient:
        for key in obj:
            if key not in _ENTITY_REQUIRED and key not in _ENTITY_OPTIONAL:
                issues.append(IngestIssue(line_no, PARSE_ERROR, f"unknown key {key!r}"))
    for key in ("id", "label", "kind", "time", "lat", "lon", "country"):
        if key in obj and not isinstance(obj[key], str):
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"{key!r} must be a string"))
    attrs = obj.get("attrs", {})
    if not isinstance(attrs, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in attrs.items()
    ):
        issues.append(IngestIssue(line_no, PARSE_ERROR, "'attrs' must map strings to strings"))
    if ("lat" in obj) != ("lon" in obj):
        issues.append(IngestIssue(line_no, PARSE_ERROR, "'lat' and 'lon' must appear together"))
    if "country" in obj and "lat" not in obj:
        issues.append(IngestIssue(line_no, PARSE_ERROR, "'country' requires a location"))
    if len(issues) > before:
        return None

    time_span = None
    if "time" in obj:
        try:
            time_span = normalize_time(obj["time"])
        except TimeFormatError as exc:
            issues.append(IngestIssue(line_no, TIME_FORMAT, str(exc)))

    location = None
    region: RegionPath | None = None
    if "lat" in obj and "lon" in obj:
        try:
            location = normalize_space(obj["lat"], obj["lon"])
        except LatOutOfRangeError as exc:
            issues.append(IngestIssue(line_no, LAT_OUT_OF_RANGE, str(exc)))
        except SpaceFormatError as exc:
            issues.append(IngestIssue(line_no, SPACE_FORMAT, str(exc)))
    if location is not None:
        if "country" in obj:
            continent = CountryExtents.bundled().continent_of(obj["country"])
            if continent is None:
                issues.append(
                    IngestIssue(line_no, UNKNOWN_COUNTRY, f"country {obj['country']!r} not in extent table")
                )
            else:
                region = RegionPath(continent, obj["country"])
        else:
            region = resolve_region(location)

    if len(issues) > before:
        return None
    return Entity(
        id=obj["id"],
        label=obj["label"],
        kind=obj["kind"],
        attributes=dict(attrs),
        time=time_span,
        location=location,
        region=region,
    )


def _parse_edge(obj: dict, line_no: int, lenient: bool, issues: list[IngestIssue]) -> RelationEdge | None:
    before = len(issues)
    for key in _EDGE_REQUIRED:
        if key not in obj:
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"missing key {key!r}"))
    if not lenient:
        for key in obj:
            if key not in _EDGE_REQUIRED:
                issues.append(IngestIssue(line_no, PARSE_ERROR, f"unknown key {key!r}"))
    for key in ("source", "target", "predicate"):
        if key in obj and not isinstance(obj[key], str):
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"{key!r} must be a string"))
    if len(issues) > before:
        return None
    return RelationEdge(obj["source"], obj["target"], obj["predicate"])


def ingest_report(source: bytes | str | IO, lenient: bool = False) -> tuple[Dataset | None, IngestReport]:
    """Parse and validate a source, returning (dataset, exhaustive report).

    The dataset is None unless the report is clean. Line-level issues
    suppress dataset-level validation, which would otherwise double-report
    their fallout (a skipped entity looks like a dangling endpoint).
    """
    issues: list[IngestIssue] = []
    entities: list[Entity] = []
    edges: list[RelationEdge] = []
    for line_no, line in enumerate(_read_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            issues.append(IngestIssue(line_no, PARSE_ERROR, "record is not a JSON object"))
            continue
        kind = obj.get("type")
        if kind == "entity":
            entity = _parse_entity(obj, line_no, lenient, issues)
            if entity is not None:
                entities.append(entity)
        elif kind == "edge":
            edge = _parse_edge(obj, line_no, lenient, issues)
            if edge is not None:
                edges.append(edge)
        else:
            issues.append(IngestIssue(line_no, PARSE_ERROR, f"'type' must be 'entity' or 'edge', got {kind!r}"))

    dataset = Dataset(entities, edges)
    if not issues:
        for violation in validate_dataset(dataset):
            issues.append(IngestIssue(0, violation.code, str(violation)))
    report = IngestReport(tuple(issues), len(entities), len(edges))
    return (dataset if report.ok else None), report


def parse_dataset(source: bytes | str | IO, lenient: bool = False) -> Dataset:
    """Parse a source all-or-nothing; raises IngestError carrying the report."""
    dataset, report = ingest_report(source, lenient=lenient)
    if dataset is None:
        raise IngestError(report)
    return dataset


# --- canonical export --------------------------------------------------------


def export_dataset(d: Dataset) -> str:
    """Serialize a dataset back to NDJSON in canonical field order.

    Explicit country fields are emitted for every entity with a known
    region so that re-parsing never depends on geometric resolution
    agreeing with a possibly-overridden region.
    """
    lines = []
    for e in d.entities:
        obj: dict[str, object] = {"type": "entity", "id": e.id, "label": e.label, "kind": e.kind}
        if e.time is not None:
            obj["time"] = format_time(e.time)
        if e.location is not None:
            obj["lat"] = repr(e.location.lat)
            obj["lon"] = repr(e.location.lon)
        if e.region is not None and e.region.known:
            obj["country"] = e.region.country
        if e.attributes:
            obj["attrs"] = e.attributes
        lines.append(json.dumps(obj, ensure_ascii=False))
    for edge in d.edges:
        lines.append(
            json.dumps(
                {"type": "edge", "source": edge.source, "target": edge.target, "predicate": edge.predicate},
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
