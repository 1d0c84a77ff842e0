"""
CSV dataset ingestion.

Format: a header row, numeric feature columns, a binary `label` column and
optionally a binary `property` column. A property column that is not one
of the feature columns is appended as the last feature, so the property
stays a function of the features the model sees. Alternatively the
property is a threshold on a named feature column.

Victim and adversary sources are split: a seeded `holdout` fraction of
each property class (default 1/3, at least one row per side) feeds the adversary's empirical conditionals, the rest
feeds the challenger's.
"""

import logging
import re
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from distributions import (
    Dataset,
    DistributionSource,
    EmpiricalSource,
    PropertyPredicate,
    feature_predicate,
    property_rate,
    threshold_predicate,
)
from seeding import make_rng

logger = logging.getLogger(__name__)

HEADER_LINES = 1


class SchemaError(ValueError):
    """CSV contents do not match the declared schema."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class CsvDatasetDescriptor:
    path: str
    label_column: str = "label"
    property_column: Optional[str] = "property"
    property_feature: Optional[str] = None
    property_threshold: float = 0.5
    feature_columns: Optional[Tuple[str, ...]] = None
    holdout: float = 1.0 / 3.0
    seed: int = 0

    def __post_init__(self):
        if self.feature_columns is not None:
            object.__setattr__(self, "feature_columns", tuple(self.feature_columns))
        if (self.property_column is None) == (self.property_feature is None):
            raise SchemaError("declare exactly one of property_column and property_feature")
        if not 0.0 <= self.holdout < 1.0:
            raise SchemaError(f"holdout must lie in [0, 1), got {self.holdout}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if self.feature_columns is not None:
            data["feature_columns"] = list(self.feature_columns)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CsvDatasetDescriptor":
        data = dict(data)
        if data.get("feature_columns") is not None:
            data["feature_columns"] = tuple(data["feature_columns"])
        return cls(**data)


@dataclass(frozen=True)
class CsvData:
    """A loaded CSV with its property and the split conditional sources."""
    dataset: Dataset
    feature_names: Tuple[str, ...]
    f: PropertyPredicate
    base_rate: float
    positive: DistributionSource
    negative: DistributionSource
    attacker_positive: DistributionSource
    attacker_negative: DistributionSource


def _read_frame(path: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip", skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{path} is empty; a header row is required") from exc
    except pd.errors.ParserError as exc:
        found = re.search(r"line (\d+)", str(exc))
        raise SchemaError(f"{path}: malformed row ({exc})",
                          line=int(found.group(1)) if found else None) from exc
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame


def _require(frame: pd.DataFrame, columns: Sequence[str]) -> None:
    for column in columns:
        if column not in frame.columns:
            raise SchemaError(f"missing column {column!r}")


def _numeric(frame: pd.DataFrame, column: str) -> np.ndarray:
    values = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0])
        raise SchemaError(f"column {column!r} has non-numeric value {frame[column].iloc[row]!r}",
                          line=row + 1 + HEADER_LINES)
    return values


def _binary(frame: pd.DataFrame, column: str) -> np.ndarray:
    values = _numeric(frame, column)
    bad = np.flatnonzero((values != 0) & (values != 1))
    if bad.size:
        row = int(bad[0])
        raise SchemaError(f"column {column!r} must be 0 or 1, got {values[row]:g}",
                          line=row + 1 + HEADER_LINES)
    return values.astype(np.int64)


def read_dataset(path: str, label_column: str = "label",
                 feature_columns: Optional[Sequence[str]] = None) -> Tuple[Dataset, List[str]]:
    """Features and labels only; every non-label column is a feature by default."""
    frame = _read_frame(path)
    _require(frame, [label_column])
    names = list(feature_columns) if feature_columns is not None else [
        c for c in frame.columns if c != label_column]
    _require(frame, names)
    labels = _binary(frame, label_column)
    if names:
        features = np.column_stack([_numeric(frame, c) for c in names])
    else:
        features = np.zeros((len(frame), 0))
    return Dataset(features, labels, dim=len(names)), names


def save_csv(data: Dataset, path: str, feature_names: Optional[Sequence[str]] = None,
             label_column: str = "label") -> None:
    names = list(feature_names) if feature_names is not None else [f"x{i}" for i in range(data.dim)]
    if len(names) != data.dim:
        raise SchemaError(f"{len(names)} feature names for {data.dim} features")
    frame = pd.DataFrame(data.features, columns=names)
    frame[label_column] = data.labels
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {len(data)} rows to {path}")


def _split_sources(data: Dataset, f: PropertyPredicate, rows: np.ndarray,
                   tag: str) -> Tuple[DistributionSource, DistributionSource]:
    part = data.subset(rows)
    flags = f.evaluate_many(part.features)
    return (EmpiricalSource(part.subset(np.flatnonzero(flags == 1)), name=f"{tag} D+"),
            EmpiricalSource(part.subset(np.flatnonzero(flags == 0)), name=f"{tag} D-"))


def _holdout_rows(flags: np.ndarray, holdout: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded split stratified by property class; every side keeps a row of each class."""
    order = make_rng(seed).permutation(len(flags))
    if not holdout:
        return order, order
    attacker, victim = [], []
    for value in (1, 0):
        rows = order[flags[order] == value]
        if len(rows) == 1:
            raise SchemaError(f"only one row has property {value}; the adversary holdout and the "
                              f"victim split each need one (set holdout to 0 to share rows)")
        held = min(max(int(round(holdout * len(rows))), 1), max(len(rows) - 1, 0))
        attacker.append(rows[:held])
        victim.append(rows[held:])
    return np.sort(np.concatenate(attacker)), np.sort(np.concatenate(victim))


def load_csv(desc: CsvDatasetDescriptor) -> CsvData:
    """Parse the file, attach the property and build victim/adversary conditionals."""
    frame = _read_frame(desc.path)
    _require(frame, [desc.label_column])
    reserved = {desc.label_column}
    if desc.property_column is not None:
        _require(frame, [desc.property_column])
        if desc.feature_columns is None or desc.property_column not in desc.feature_columns:
            reserved.add(desc.property_column)
    names = list(desc.feature_columns) if desc.feature_columns is not None else [
        c for c in frame.columns if c not in reserved]
    _require(frame, names)

    labels = _binary(frame, desc.label_column)
    columns = [_numeric(frame, c) for c in names]
    if desc.property_column is not None:
        values = _binary(frame, desc.property_column)
        if desc.property_column in names:
            f = feature_predicate(names.index(desc.property_column))
        else:
            columns.append(values.astype(float))
            names.append(desc.property_column)
            f = feature_predicate(len(names) - 1)
    else:
        if desc.property_feature not in names:
            raise SchemaError(f"property feature {desc.property_feature!r} is not a feature column")
        f = threshold_predicate(names.index(desc.property_feature), desc.property_threshold)

    features = np.column_stack(columns) if columns else np.zeros((len(frame), 0))
    data = Dataset(features, labels, dim=len(names))
    base_rate = property_rate(data, f)

    attacker_rows, victim_rows = _holdout_rows(f.evaluate_many(data.features), desc.holdout, desc.seed)
    held = len(attacker_rows) if desc.holdout else 0
    positive, negative = _split_sources(data, f, victim_rows, "victim")
    attacker_positive, attacker_negative = _split_sources(data, f, attacker_rows, "attacker")
    logger.info(f"Loaded {len(data)} rows from {desc.path}: property rate {base_rate:.3f}, "
                f"{held} rows held out for the adversary")
    return CsvData(data, tuple(names), f, base_rate, positive, negative,
                   attacker_positive, attacker_negative)
