"""
Exact Bayes-optimal classification over finite distributions.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Tuple, Union

import numpy as np

from distributions import FiniteDistribution


class UndefinedPredictionError(ValueError):
    """A classifier has no prediction for a support point."""


class TableClassifier:
    """Decision table: support point -> label."""

    def __init__(self, table: Dict[Tuple[float, ...], int]):
        self._table = dict(table)

    def predict(self, x: np.ndarray) -> int:
        key = tuple(float(v) for v in np.asarray(x, dtype=float).reshape(-1))
        if key not in self._table:
            raise UndefinedPredictionError(f"no prediction for {key}")
        return self._table[key]

    def predict_many(self, features: np.ndarray) -> np.ndarray:
        return np.array([self.predict(row) for row in np.atleast_2d(features)], dtype=np.int64)

    def __call__(self, x: np.ndarray) -> int:
        return self.predict(x)

    def __len__(self) -> int:
        return len(self._table)


class BayesClassifier(TableClassifier):
    """h*(x) = argmax_y Pr[Y=y | X=x]; a tie at exactly 1/2 predicts 1."""

    def __init__(self, dist: FiniteDistribution):
        labels = bayes_labels(dist.posteriors)
        super().__init__({tuple(float(v) for v in x): int(y) for x, y in zip(dist.points, labels)})
        self.source = dist
        self.labels = labels


Classifier = Union[TableClassifier, Callable[[np.ndarray], int]]


@dataclass(frozen=True)
class RiskDecomposition:
    """Risk(h) = Bayes + excess, up to a numerical residual."""
    bayes: float
    excess: float
    residual: float


def bayes_labels(posteriors: np.ndarray) -> np.ndarray:
    return (np.asarray(posteriors) >= 0.5).astype(np.int64)


def certainty(dist: FiniteDistribution, x: np.ndarray) -> float:
    """Signed certainty crt(x, D) = 1 - 2 Pr[Y=1 | X=x]."""
    try:
        return 1.0 - 2.0 * dist.posterior(x)
    except KeyError as exc:
        raise UndefinedPredictionError(str(exc)) from None


def certainties(dist: FiniteDistribution) -> np.ndarray:
    return 1.0 - 2.0 * dist.posteriors


def bayes_optimal(dist: FiniteDistribution) -> BayesClassifier:
    return BayesClassifier(dist)


def bayes_error(dist: FiniteDistribution) -> float:
    eta = dist.posteriors
    return float(np.sum(dist.masses * np.minimum(eta, 1.0 - eta)))


def predictions_on_support(h: Classifier, dist: FiniteDistribution) -> np.ndarray:
    """Evaluate h at every support point, in support order."""
    if isinstance(h, TableClassifier):
        return h.predict_many(dist.points)
    if hasattr(h, "predict_many"):
        return np.asarray(h.predict_many(dist.points), dtype=np.int64)
    out = np.empty(len(dist), dtype=np.int64)
    for i, x in enumerate(dist.points):
        label = h(x)
        if label not in (0, 1):
            raise UndefinedPredictionError(f"classifier returned {label!r} at {tuple(x)}")
        out[i] = int(label)
    return out


def risk_of_labels(labels: np.ndarray, dist: FiniteDistribution) -> float:
    eta = dist.posteriors
    return float(np.sum(dist.masses * np.where(labels == 1, 1.0 - eta, eta)))


def risk(h: Classifier, dist: FiniteDistribution) -> float:
    """Pr[h(x) != y] under dist."""
    return risk_of_labels(predictions_on_support(h, dist), dist)


def risk_decomposition_check(h: Classifier, dist: FiniteDistribution) -> RiskDecomposition:
    """Split Risk(h) into Bayes error plus the certainty-weighted disagreement with h*."""
    labels = predictions_on_support(h, dist)
    optimal = bayes_labels(dist.posteriors)
    bayes = bayes_error(dist)
    excess = float(np.sum(dist.masses * np.abs(labels - optimal) * np.abs(certainties(dist))))
    residual = risk_of_labels(labels, dist) - bayes - excess
    return RiskDecomposition(bayes, excess, residual)


def all_label_risks(dist: FiniteDistribution) -> np.ndarray:
    """Risk of every one of the 2^|support| deterministic classifiers."""
    k = len(dist)
    if k > 20:
        raise ValueError(f"exhaustive enumeration over {k} points is too large")
    codes = np.arange(2 ** k, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(k)) & 1
    eta = dist.posteriors
    per_point = np.where(bits == 1, 1.0 - eta, eta)
    return per_point @ dist.masses

