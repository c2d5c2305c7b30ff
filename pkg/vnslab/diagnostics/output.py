"""Series CSV, summary JSON and the matching readers."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from vnslab.diagnostics.energy import ENERGY_FIELDS, EnergyRecord
from vnslab.errors import UsageError


def _format(value: float) -> str:
    return format(value, ".17g")


def write_series(records: Iterable[EnergyRecord], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ENERGY_FIELDS)
        for record in records:
            writer.writerow([_format(getattr(record, name)) for name in ENERGY_FIELDS])
    return path


def read_series(path: str | Path) -> dict[str, np.ndarray]:
    """Column name -> float array. Accepts any numeric CSV with a header row."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"series file not found: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames:
            raise UsageError(f"{path}: missing header row")
        columns: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                columns[name].append(float(row[name]))
    return {name: np.asarray(values) for name, values in columns.items()}


def to_plain(value):
    if isinstance(value, dict):
        return {key: to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    return value


def write_summary(summary: dict, path: str | Path) -> Path:
    """JSON with non-finite numbers written as null."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_plain(summary), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return path


def records_column(records: Sequence[EnergyRecord], name: str) -> np.ndarray:
    if name not in ENERGY_FIELDS:
        raise UsageError(f"unknown series column {name!r}")
    return np.array([getattr(r, name) for r in records])
