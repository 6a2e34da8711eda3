"""Coordinate-to-region resolution against a bundled country-extent table.

The table maps ISO 3166-1 alpha-2 codes to a continent plus one or more
coarse lat/lon rectangles (closed containment). Overlapping rectangles are
resolved by smallest rectangle area, then lexicographic country code, which
makes the lookup total, pure, and deterministic. Precision is demo-grade by
design; curated datasets can bypass geometry with an explicit country field
at ingest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from geoviz import data as _data
from geoviz.model import GeoPoint, RegionPath

UNKNOWN_REGION = RegionPath(None, None)


@dataclass(frozen=True)
class _Box:
    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float
    area: float
    country: str
    continent: str

    def contains(self, lat: float, lon: float) -> bool:
        return (
            self.min_lat <= lat <= self.max_lat
            and self.min_lon <= lon <= self.max_lon
        )


class CountryExtents:
    """An extent table supporting point lookup and code->continent queries."""

    def __init__(self, table: dict[str, dict]) -> None:
        self._continents: dict[str, str] = {}
        self._boxes: list[_Box] = []
        for country in sorted(table):
            entry = table[country]
            continent = entry["continent"]
            self._continents[country] = continent
            for min_lat, min_lon, max_lat, max_lon in entry["boxes"]:
                area = (max_lat - min_lat) * (max_lon - min_lon)
                self._boxes.append(
                    _Box(min_lat, min_lon, max_lat, max_lon, area, country, continent)
                )
        # smallest area first, country code breaks ties
        self._boxes.sort(key=lambda b: (b.area, b.country))

    @staticmethod
    @lru_cache(maxsize=1)
    def bundled() -> CountryExtents:
        with open(_data.country_extents_path(), encoding="utf-8") as f:
            return CountryExtents(json.load(f))

    def resolve(self, p: GeoPoint) -> RegionPath:
        for box in self._boxes:
            if box.contains(p.lat, p.lon):
                return RegionPath(box.continent, box.country)
        return UNKNOWN_REGION

    def continent_of(self, country: str) -> str | None:
        return self._continents.get(country)

    def countries(self) -> list[str]:
        return sorted(self._continents)


def resolve_region(p: GeoPoint) -> RegionPath:
    """Resolve a point against the bundled extents; no match is (None, None)."""
    return CountryExtents.bundled().resolve(p)


def continent_of(country: str) -> str | None:
    return CountryExtents.bundled().continent_of(country)
