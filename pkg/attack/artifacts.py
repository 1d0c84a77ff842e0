"""
Attack artifact files.

Poison CSV columns: x0 .. x{d-1}, label, variant
Query CSV columns:  x0 .. x{d-1}, is_poison   (rows in query order)
Attack model JSON:  {"format", "weights", "intercept", "l2", "degenerate",
                     "training_accuracy", "query_fingerprint"}

An attack model is only loaded against the query set whose fingerprint it
was saved with.
"""

import json
import logging
from typing import List, Optional

import numpy as np
import pandas as pd

from distributions import Dataset

from .poison import PoisonSet, PoisonVariant
from .queries import QuerySet
from .shadow import ArtifactMismatchError, AttackModel

logger = logging.getLogger(__name__)

ATTACK_MODEL_FORMAT = "poisonsnek-attack/1"
FLOAT_FORMAT = "%.17g"


def _feature_columns(dim: int) -> List[str]:
    return [f"x{i}" for i in range(dim)]


def _read_features(frame: pd.DataFrame, path: str) -> np.ndarray:
    columns = [c for c in frame.columns if c.startswith("x")]
    expected = _feature_columns(len(columns))
    if columns != expected:
        raise ArtifactMismatchError(f"{path}: feature columns {columns} are not {expected}")
    return frame[columns].to_numpy(dtype=float)


def save_poison(poison: PoisonSet, path: str) -> None:
    frame = pd.DataFrame(poison.features, columns=_feature_columns(poison.examples.dim))
    frame["label"] = poison.examples.labels
    frame["variant"] = poison.variant.name
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Saved {len(poison)} poison points to {path}")


def load_poison(path: str, dim: Optional[int] = None) -> PoisonSet:
    frame = pd.read_csv(path, float_precision="round_trip")
    features = _read_features(frame, path)
    if len(frame) == 0:
        if dim is None:
            dim = features.shape[1]
        return PoisonSet.empty(dim)
    variants = set(frame["variant"])
    if len(variants) != 1:
        raise ArtifactMismatchError(f"{path}: mixed poison variants {sorted(variants)}")
    variant = PoisonVariant[variants.pop()]
    labels = frame["label"].to_numpy(dtype=np.int64)
    if np.any(labels != variant.label):
        raise ArtifactMismatchError(f"{path}: labels disagree with variant {variant.name}")
    return PoisonSet(Dataset(features, labels), variant)


def save_queries(queries: QuerySet, path: str) -> None:
    frame = pd.DataFrame(queries.points, columns=_feature_columns(queries.dim))
    is_poison = np.zeros(len(queries), dtype=np.int64)
    is_poison[len(queries) - queries.poison_count:] = 1
    frame["is_poison"] = is_poison
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Saved {len(queries)} query points to {path}")


def load_queries(path: str) -> QuerySet:
    frame = pd.read_csv(path, float_precision="round_trip")
    points = _read_features(frame, path)
    flags = frame["is_poison"].to_numpy(dtype=np.int64)
    count = int(flags.sum())
    if count and not np.all(flags[len(flags) - count:] == 1):
        raise ArtifactMismatchError(f"{path}: poison rows must come last")
    return QuerySet(points, count)


def save_attack_model(model: AttackModel, path: str) -> None:
    record = {
        "format": ATTACK_MODEL_FORMAT,
        "weights": model.weights.tolist(),
        "intercept": model.intercept,
        "l2": model.l2,
        "degenerate": model.degenerate,
        "training_accuracy": model.training_accuracy,
        "query_fingerprint": model.query_fingerprint,
    }
    with open(path, "w") as f:
        json.dump(record, f, indent=2)
    logger.info(f"Saved attack model to {path}")


def load_attack_model(path: str, queries: Optional[QuerySet] = None) -> AttackModel:
    """Load an attack model; with `queries` given, the fingerprints must match."""
    with open(path, "r") as f:
        record = json.load(f)
    if record.get("format") != ATTACK_MODEL_FORMAT:
        raise ArtifactMismatchError(f"{path}: unknown attack model format {record.get('format')!r}")
    model = AttackModel(np.array(record["weights"], dtype=float), float(record["intercept"]),
                        float(record["l2"]), record["query_fingerprint"],
                        bool(record.get("degenerate", False)),
                        float(record.get("training_accuracy", float("nan"))))
    if queries is not None and queries.fingerprint != model.query_fingerprint:
        raise ArtifactMismatchError(
            f"{path} was trained on queries {model.query_fingerprint[:12]}..., "
            f"not {queries.fingerprint[:12]}...")
    return model
