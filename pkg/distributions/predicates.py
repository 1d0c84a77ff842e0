"""
Property predicates over feature vectors.

A property is a deterministic map from a feature vector to {0, 1}. Base
properties read a single binary feature; derived properties are any total
function of the features (e.g. "age above 40").
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class PropertyPredicate:
    """Boolean property f: X -> {0, 1} with a human-readable description."""
    evaluator: Callable[[np.ndarray], int]
    description: str

    def __call__(self, x: np.ndarray) -> int:
        return 1 if self.evaluator(np.asarray(x, dtype=float)) else 0

    def evaluate_many(self, features: np.ndarray) -> np.ndarray:
        """Evaluate on every row of a 2-D feature matrix."""
        features = np.atleast_2d(np.asarray(features, dtype=float))
        if features.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return np.fromiter((self(row) for row in features), dtype=np.int64,
                           count=features.shape[0])

    def complement(self) -> "PropertyPredicate":
        """The property 1 - f."""
        base = self
        return PropertyPredicate(lambda x: 1 - base(x), f"not ({self.description})")

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], object],
                      description: str) -> "PropertyPredicate":
        """Wrap an arbitrary derived property; truthy results map to 1."""
        return cls(lambda x: 1 if func(x) else 0, description)


def feature_predicate(index: int) -> PropertyPredicate:
    """f(x) = 1 iff feature `index` is set (value >= 0.5)."""
    return PropertyPredicate(lambda x: 1 if x[index] >= 0.5 else 0,
                             f"feature[{index}] == 1")


def threshold_predicate(index: int, threshold: float) -> PropertyPredicate:
    """f(x) = 1 iff feature `index` exceeds `threshold`."""
    return PropertyPredicate(lambda x: 1 if x[index] > threshold else 0,
                             f"feature[{index}] > {threshold:g}")
