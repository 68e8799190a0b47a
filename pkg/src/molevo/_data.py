"""Location of bundled data tables.

Set ``MOLEVO_DATA_DIR`` to point every table lookup at another directory;
files missing there fall back to the bundled copies.
"""
from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path

BUNDLED_DIR = Path(__file__).resolve().parent / "data"
ENV_VAR = "MOLEVO_DATA_DIR"


def data_path(name: str) -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return BUNDLED_DIR / name


@lru_cache(maxsize=None)
def load_json(name: str) -> dict:
    with open(data_path(name), encoding="utf-8") as fh:
        return json.load(fh)


def read_table(name: str) -> list[list[str]]:
    """Read a tab-separated table, skipping blank lines and ``#`` comments."""
    rows = []
    with open(data_path(name), encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            rows.append(line.split("\t"))
    return rows
