"""
Poison selection.

The poison set is m = p * n points drawn from one property conditional and
given one shared label. The conditional is D+ when t0 + t1 < 1, otherwise
D-; the label is the opposite of the sample's majority label (all 0 when
the mean label exceeds 1/2, else all 1).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from distributions import Dataset, DistributionError, DistributionSource, PropertyPredicate, sample

logger = logging.getLogger(__name__)


class PoisonVariant(Enum):
    """Which conditional the features come from and which label they carry."""
    POSITIVE_LABEL_1 = ("positive", 1)
    POSITIVE_LABEL_0 = ("positive", 0)
    NEGATIVE_LABEL_1 = ("negative", 1)
    NEGATIVE_LABEL_0 = ("negative", 0)

    @property
    def conditional(self) -> str:
        return self.value[0]

    @property
    def label(self) -> int:
        return self.value[1]

    @property
    def property_value(self) -> int:
        return 1 if self.conditional == "positive" else 0

    @classmethod
    def of(cls, conditional: str, label: int) -> "PoisonVariant":
        return cls((conditional, int(label)))


@dataclass(frozen=True)
class PoisonSet:
    """Label-pure poison examples plus the variant that produced them."""
    examples: Dataset
    variant: PoisonVariant
    alpha: float = float("nan")

    def __len__(self) -> int:
        return len(self.examples)

    @property
    def features(self) -> np.ndarray:
        return self.examples.features

    @property
    def label(self) -> int:
        return self.variant.label

    @classmethod
    def empty(cls, dim: int) -> "PoisonSet":
        """No poison (p = 0); the variant is nominal."""
        return cls(Dataset(np.zeros((0, dim)), np.zeros(0), dim=dim), PoisonVariant.POSITIVE_LABEL_1)


def split_sizes(n: int, p: float) -> Tuple[int, int]:
    """(clean, poison) counts with poison = round(p * n)."""
    if n < 1:
        raise ValueError(f"training size must be >= 1, got {n}")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"poison rate must lie in [0, 1), got {p}")
    poison = int(round(p * n))
    return n - poison, poison


def choose_conditional(t0: float, t1: float) -> str:
    return "positive" if t0 + t1 < 1.0 else "negative"


def choose_label(alpha: float) -> int:
    return 0 if alpha > 0.5 else 1


def select_poison(f: PropertyPredicate, t0: float, t1: float, p: float, n: int,
                  positive: DistributionSource, negative: DistributionSource,
                  seed: int) -> PoisonSet:
    """Draw m = p * n points from the chosen conditional and relabel them uniformly."""
    if not 0.0 <= t0 < t1 <= 1.0:
        raise ValueError(f"need 0 <= t0 < t1 <= 1, got t0={t0}, t1={t1}")
    _, m = split_sizes(n, p)
    if m < 1:
        raise ValueError(f"p * n must be >= 1 to poison, got p={p}, n={n}")

    conditional = choose_conditional(t0, t1)
    source = positive if conditional == "positive" else negative
    drawn = sample(source, m, seed)

    expected = 1 if conditional == "positive" else 0
    if np.any(f.evaluate_many(drawn.features) != expected):
        raise DistributionError(
            f"{source.name!r} produced points with {f.description} != {expected}")

    alpha = float(drawn.labels.mean())
    variant = PoisonVariant.of(conditional, choose_label(alpha))
    logger.info(f"Selected {m} poison points: {variant.name} (alpha={alpha:.3f})")
    return PoisonSet(drawn.relabel(variant.label), variant, alpha)
