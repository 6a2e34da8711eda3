"""Shared fixtures: randomized-but-valid datasets and small helpers.

Random datasets are produced as NDJSON text and run through the real
parser, so every generated dataset also exercises normalization and
carries resolved regions, exactly like production data.
"""

from __future__ import annotations

import json
import random

import pytest

from geoviz import data as bundled_data
from geoviz.graph import Graph, load
from geoviz.ingest import parse_dataset
from geoviz.model import Dataset

WORDS = [
    "landslide", "debris", "flow", "rockfall", "flood", "rain", "storm",
    "valley", "slope", "river", "village", "county", "mountain", "glacier",
    "danba", "survey", "report", "dam", "lake", "burst", "monsoon", "ridge",
]
KINDS = ["landslide", "debris_flow", "flood", "rockfall", "place", "concept", "rainfall"]
PREDICATES = ["occurred_in", "instance_of", "triggered_by", "part_of", "related_to"]


def random_time_value(rng: random.Random) -> str:
    year = rng.randint(1900, 2030)
    form = rng.randrange(4)
    if form == 0:
        return f"{year:04d}"
    if form == 1:
        return f"{year:04d}-{rng.randint(1, 12):02d}"
    if form == 2:
        return f"{year:04d}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
    later = year + rng.randint(1, 3)
    return f"{year:04d}/{later:04d}-{rng.randint(1, 12):02d}"


def random_records(
    rng: random.Random,
    n_entities: int = 50,
    edge_p: float = 0.1,
    timed_p: float = 0.75,
    located_p: float = 0.75,
) -> str:
    """Valid NDJSON with random attributes, times, and locations."""
    lines = []
    ids = [f"n{i:03d}" for i in range(n_entities)]
    for eid in ids:
        rec: dict = {
            "type": "entity",
            "id": eid,
            "label": " ".join(rng.sample(WORDS, rng.randint(1, 3))),
            "kind": rng.choice(KINDS),
        }
        if rng.random() < timed_p:
            rec["time"] = random_time_value(rng)
        if rng.random() < located_p:
            rec["lat"] = repr(round(rng.uniform(-90.0, 90.0), 4))
            rec["lon"] = repr(round(rng.uniform(-179.9, 180.0), 4))
        if rng.random() < 0.5:
            rec["attrs"] = {
                "description": " ".join(rng.sample(WORDS, rng.randint(2, 5))),
            }
        lines.append(json.dumps(rec))
    seen = set()
    for a in ids:
        for b in ids:
            if a < b and rng.random() < edge_p:
                direction = (a, b) if rng.random() < 0.5 else (b, a)
                predicate = rng.choice(PREDICATES)
                if (direction, predicate) in seen:
                    continue
                seen.add((direction, predicate))
                lines.append(
                    json.dumps(
                        {
                            "type": "edge",
                            "source": direction[0],
                            "target": direction[1],
                            "predicate": predicate,
                        }
                    )
                )
    return "\n".join(lines) + "\n"


def random_dataset(rng: random.Random, n_entities: int = 50, edge_p: float = 0.1) -> Dataset:
    return parse_dataset(random_records(rng, n_entities=n_entities, edge_p=edge_p))


@pytest.fixture(scope="session")
def sample_dataset() -> Dataset:
    with open(bundled_data.sample_dataset_path(), "rb") as f:
        return parse_dataset(f)


@pytest.fixture(scope="session")
def sample_graph(sample_dataset: Dataset) -> Graph:
    return load(sample_dataset)
