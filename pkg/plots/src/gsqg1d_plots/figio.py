"""Readers for the solver's CSV/JSON file contracts."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class MissingColumnError(KeyError):
    """A required column is absent from an input file."""

    def __init__(self, path, column):
        super().__init__(f"{path}: missing column {column!r}")
        self.path = str(path)
        self.column = column


def load_columns(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    data = list(zip(*rows)) if rows else [[] for _ in names]
    return {k: np.asarray(v, dtype=float) for k, v in zip(names, data)}


def column(table: dict, path, name: str) -> np.ndarray:
    if name not in table:
        raise MissingColumnError(path, name)
    return table[name]


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())
