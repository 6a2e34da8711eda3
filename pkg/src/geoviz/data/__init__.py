"""Bundled data files: coarse country extents and the sample dataset."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def country_extents_path() -> Path:
    return Path(str(resources.files(__name__) / "country_extents.json"))


def sample_dataset_path() -> Path:
    return Path(str(resources.files(__name__) / "sample.ndjson"))
