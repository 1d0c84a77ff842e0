"""
Target-model training, label-only prediction and quality metrics.

Only `predict` / `predict_many` return information about a trained model
to callers outside this package; both return hard labels. The margin is
private and the BlackBox wrapper hides everything else.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np
from sklearn.metrics import accuracy_score, precision_score, recall_score

from distributions import Dataset, DistributionSource, EmptyDatasetError, sample_many
from seeding import derive_seed, make_rng

from .parallel import run_indexed
from .sgd import Layer, TrainingError, fit, forward, init_layers, log_odds
from .spec import ModelSpec

logger = logging.getLogger(__name__)


class DimensionMismatchError(ValueError):
    """Feature dimensionality differs from what the model was trained on."""


class LabelOnlyClassifier(Protocol):
    """The black-box contract: hard labels, nothing else."""

    def predict(self, x: np.ndarray) -> int: ...

    def predict_many(self, features: np.ndarray) -> np.ndarray: ...


class TrainedModel:
    """Immutable trained classifier with its scaler.

    Inputs are mapped to `(x - center) / half_range`: centred on the
    training mean, with the training min-max range spanning width 2.
    """

    def __init__(self, spec: ModelSpec, layers: Sequence[Layer], center: np.ndarray,
                 half_range: np.ndarray, seed: int):
        self.spec = spec
        self.seed = int(seed)
        frozen = []
        for W, b in layers:
            W, b = np.array(W, dtype=float), np.array(b, dtype=float)
            W.setflags(write=False)
            b.setflags(write=False)
            frozen.append((W, b))
        self._layers: Tuple[Layer, ...] = tuple(frozen)
        self._center = np.array(center, dtype=float)
        self._half_range = np.array(half_range, dtype=float)
        self._center.setflags(write=False)
        self._half_range.setflags(write=False)

    @property
    def input_dim(self) -> int:
        return self._center.shape[0]

    def _check_dim(self, features: np.ndarray) -> np.ndarray:
        features = np.atleast_2d(np.asarray(features, dtype=float))
        if features.shape[1] != self.input_dim:
            raise DimensionMismatchError(
                f"model expects {self.input_dim} features, got {features.shape[1]}")
        return features

    def _margin(self, features: np.ndarray) -> np.ndarray:
        scaled = (self._check_dim(features) - self._center) / self._half_range
        return forward(list(self._layers), scaled)

    def predict(self, x: np.ndarray) -> int:
        """Hard label; a margin of exactly 0 (probability 1/2) predicts 1."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise DimensionMismatchError(f"predict takes one feature vector, got shape {x.shape}")
        return int(self._margin(x[None, :])[0] >= 0.0)

    def predict_many(self, features: np.ndarray) -> np.ndarray:
        return (self._margin(features) >= 0.0).astype(np.int64)

    def parameters(self) -> Tuple[Tuple[Layer, ...], np.ndarray, np.ndarray]:
        """Raw parameters, for persistence only."""
        return self._layers, self._center, self._half_range

    def __repr__(self) -> str:
        return f"TrainedModel({self.spec.label}, dim={self.input_dim}, seed={self.seed})"


class BlackBox:
    """Label-only view of a model: predict / predict_many and nothing else."""

    __slots__ = ("__model",)

    def __init__(self, model: LabelOnlyClassifier):
        self.__model = model

    def predict(self, x: np.ndarray) -> int:
        return int(self.__model.predict(x))

    def predict_many(self, features: np.ndarray) -> np.ndarray:
        return np.asarray(self.__model.predict_many(features), dtype=np.int64)


@dataclass(frozen=True)
class QualityMetrics:
    """Confusion-matrix fractions with label 1 as the positive class."""
    accuracy: float
    precision: float
    recall: float
    no_positive_predictions: bool = False
    no_positive_labels: bool = False


def _fit_scaler(features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Training-mean centre and half the training min-max range (1 where constant)."""
    half_range = (features.max(axis=0) - features.min(axis=0)) / 2.0
    half_range[half_range == 0] = 1.0
    return features.mean(axis=0), half_range


def train(spec: ModelSpec, data: Dataset, seed: int) -> TrainedModel:
    """Fit `spec` on `data`; deterministic given (spec, data order, seed)."""
    if len(data) == 0:
        raise EmptyDatasetError("cannot train on an empty dataset")
    rng = make_rng(seed)
    center, half_range = _fit_scaler(data.features)
    scaled = (data.features - center) / half_range
    widths = [data.dim, *spec.hidden, 1]
    layers = init_layers(widths, rng, output_bias=log_odds(data.labels))
    fit(layers, scaled, data.labels, learning_rate=spec.learning_rate, epochs=spec.epochs,
        batch_size=spec.batch_size, l2=spec.l2, rng=rng)
    return TrainedModel(spec, layers, center, half_range, seed)


def predict(model: LabelOnlyClassifier, x: np.ndarray) -> int:
    return int(model.predict(x))


def metrics(model: LabelOnlyClassifier, data: Dataset) -> QualityMetrics:
    """Accuracy, precision and recall; undefined ratios are reported as 0 with a flag."""
    if len(data) == 0:
        raise EmptyDatasetError("metrics need a nonempty dataset")
    predicted = model.predict_many(data.features)
    truth = data.labels
    return QualityMetrics(
        accuracy=float(accuracy_score(truth, predicted)),
        precision=float(precision_score(truth, predicted, zero_division=0)),
        recall=float(recall_score(truth, predicted, zero_division=0)),
        no_positive_predictions=bool(np.sum(predicted) == 0),
        no_positive_labels=bool(np.sum(truth) == 0),
    )


def train_ensemble(spec: ModelSpec, sources: Sequence[DistributionSource], sizes: Sequence[int],
                   count: int, seed: int, workers: Optional[int] = None,
                   progress: bool = False, extra: Optional[Dataset] = None) -> List[TrainedModel]:
    """Train `count` models, each on a fresh draw of sizes[i] points from sources[i].

    `extra` (e.g. a poison set) is appended unchanged to every member's data.
    """
    if count < 1:
        raise ValueError(f"ensemble size must be >= 1, got {count}")

    def member(i: int) -> TrainedModel:
        rng = make_rng(derive_seed(seed, i))
        data = sample_many(sources, sizes, rng)
        if extra is not None and len(extra):
            data = Dataset.concat(data, extra)
        try:
            return train(spec, data, derive_seed(seed, i, 1))
        except TrainingError as exc:
            raise TrainingError(str(exc), index=i) from exc

    models = run_indexed(member, count, workers, desc="ensemble", progress=progress)
    logger.debug(f"Trained ensemble of {count} {spec.label} models")
    return models
