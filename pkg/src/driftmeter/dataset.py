"""Balanced item-by-time-point panels and their long-format CSV form.

A panel is stored as a dense ``(item, time_point, feature)`` array.  The CSV
representation has one row per ``(item, time)`` observation::

    subject_id,period,contribution,belief
    1,1,10,8.5
    1,2,12,9.0
    ...
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateObservation,
    MissingColumn,
    NonNumericCell,
    UnbalancedPanel,
    UnknownTimePoint,
    ValidationError,
)

__all__ = [
    "TemporalDataset",
    "TimeSlice",
    "ingest_csv",
    "write_csv",
    "slice",
    "sort_item_ids",
]


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def sort_item_ids(ids):
    """Canonical item order: numeric when every id is an integer, else lexicographic."""
    ids = list(ids)
    try:
        keyed = [(int(i), i) for i in ids]
    except ValueError:
        return sorted(ids)
    return [i for _, i in sorted(keyed)]


@dataclass(frozen=True, eq=False)
class TemporalDataset:
    item_ids: tuple[str, ...]
    time_points: tuple[int, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "item_ids", tuple(str(i) for i in self.item_ids))
        object.__setattr__(self, "time_points", tuple(int(t) for t in self.time_points))
        object.__setattr__(self, "feature_names", tuple(str(f) for f in self.feature_names))
        object.__setattr__(self, "values", _frozen(self.values))

        n_items, n_times, n_feat = len(self.item_ids), len(self.time_points), len(self.feature_names)
        if n_items < 2 or n_times < 2 or n_feat < 1:
            raise ValidationError(
                f"need at least 2 items, 2 time points and 1 feature; got {n_items}, {n_times}, {n_feat}"
            )
        if len(set(self.item_ids)) != n_items:
            raise ValidationError("item ids must be unique")
        if any(b <= a for a, b in zip(self.time_points, self.time_points[1:])):
            raise ValidationError("time points must be strictly increasing")
        if self.values.shape != (n_items, n_times, n_feat):
            raise ValidationError(
                f"values has shape {self.values.shape}, expected {(n_items, n_times, n_feat)}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("values must be finite")

    @property
    def shape(self):
        return self.values.shape

    def time_index(self, t):
        try:
            return self.time_points.index(int(t))
        except (ValueError, TypeError):
            raise UnknownTimePoint(f"time point {t!r} is not in the dataset") from None

    def select_features(self, names: Sequence[str]) -> "TemporalDataset":
        missing = [n for n in names if n not in self.feature_names]
        if missing:
            raise MissingColumn(f"unknown feature(s): {', '.join(missing)}")
        idx = [self.feature_names.index(n) for n in names]
        return TemporalDataset(self.item_ids, self.time_points, tuple(names), self.values[:, :, idx])

    def equals(self, other: "TemporalDataset", atol: float = 0.0) -> bool:
        return (
            self.item_ids == other.item_ids
            and self.time_points == other.time_points
            and self.feature_names == other.feature_names
            and self.values.shape == other.values.shape
            and bool(np.allclose(self.values, other.values, rtol=0.0, atol=atol))
        )


@dataclass(frozen=True, eq=False)
class TimeSlice:
    item_ids: tuple[str, ...]
    matrix: np.ndarray
    time_point: int

    def __post_init__(self):
        object.__setattr__(self, "item_ids", tuple(self.item_ids))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.item_ids):
            raise ValidationError("slice matrix must be items x features")
        if not np.all(np.isfinite(self.matrix)):
            raise ValidationError("slice values must be finite")


def slice(ds: TemporalDataset, t) -> TimeSlice:  # noqa: A001 - mirrors the domain vocabulary
    """Observations of every item at time point ``t``, in dataset item order."""
    j = ds.time_index(t)
    return TimeSlice(ds.item_ids, ds.values[:, j, :], ds.time_points[j])


def _parse_float(cell, row_no, column):
    try:
        v = float(cell)
    except (TypeError, ValueError):
        raise NonNumericCell(f"row {row_no}, column {column!r}: {cell!r} is not a number") from None
    if not math.isfinite(v):
        raise NonNumericCell(f"row {row_no}, column {column!r}: {cell!r} is not finite")
    return v


def _parse_time(cell, row_no, column):
    try:
        return int(cell)
    except (TypeError, ValueError):
        raise NonNumericCell(
            f"row {row_no}, column {column!r}: time label {cell!r} is not an integer"
        ) from None


def ingest_csv(path, id_column: str, time_column: str, feature_columns: Sequence[str]) -> TemporalDataset:
    """Read a long-format CSV into a balanced panel.

    Row order in the file does not matter: items come out in canonical order
    (see :func:`sort_item_ids`) and time points ascending.
    """
    feature_columns = list(feature_columns)
    if not feature_columns:
        raise ValidationError("at least one feature column is required")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in [id_column, time_column, *feature_columns] if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}")

        obs: dict[tuple[str, int], list[float]] = {}
        for row_no, row in enumerate(reader, start=2):
            item = row[id_column]
            if item is None or item == "":
                raise NonNumericCell(f"row {row_no}: empty id")
            t = _parse_time(row[time_column], row_no, time_column)
            key = (item, t)
            if key in obs:
                raise DuplicateObservation(f"row {row_no}: duplicate observation for item {item!r} at {t}")
            obs[key] = [_parse_float(row[c], row_no, c) for c in feature_columns]

    items = sort_item_ids({i for i, _ in obs})
    times = sorted({t for _, t in obs})
    values = np.empty((len(items), len(times), len(feature_columns)))
    for a, item in enumerate(items):
        for b, t in enumerate(times):
            try:
                values[a, b] = obs[(item, t)]
            except KeyError:
                raise UnbalancedPanel(item, t) from None
    return TemporalDataset(tuple(items), tuple(times), tuple(feature_columns), values)


def write_csv(ds: TemporalDataset, path, id_column: str = "id", time_column: str = "t") -> None:
    """Write ``ds`` in long format; floats use the shortest round-tripping repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([id_column, time_column, *ds.feature_names])
        for a, item in enumerate(ds.item_ids):
            for b, t in enumerate(ds.time_points):
                w.writerow([item, t, *(_fmt(v) for v in ds.values[a, b])])


def _fmt(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def load_dataset(path) -> TemporalDataset:
    """Convenience reader for files produced by :func:`write_csv` (first two columns are id, time)."""
    with open(Path(path), newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh))
    if len(header) < 3:
        raise MissingColumn(f"{path}: expected id, time and at least one feature column")
    return ingest_csv(path, header[0], header[1], header[2:])
