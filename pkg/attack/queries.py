"""
Query selection by ensemble certainty.

An ensemble of r models, each trained on a balanced half D- / half D+
sample, estimates the certainty of a candidate x as 1 - 2 * (votes / r).
Candidates from (D- + D+) / 2 are kept while |certainty| <= band; the
poison features are appended after the q accepted points.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from distributions import DistributionSource, property_mixture
from seeding import derive_seed, make_rng
from target_models import LabelOnlyClassifier, ModelSpec, train_ensemble

from .poison import PoisonSet

logger = logging.getLogger(__name__)

DEFAULT_BAND = 0.4
DEFAULT_BUDGET_FACTOR = 200


class QueryBudgetExhausted(RuntimeError):
    """Too few candidates passed the certainty filter within the draw budget."""

    def __init__(self, accepted: int, wanted: int, drawn: int):
        super().__init__(f"accepted {accepted}/{wanted} query points after {drawn} candidates")
        self.accepted = accepted
        self.wanted = wanted
        self.drawn = drawn


@dataclass(frozen=True)
class QuerySet:
    """Black-box query points: filtered candidates first, poison features last."""
    points: np.ndarray
    poison_count: int = 0

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2:
            raise ValueError(f"query points must be 2-D, got shape {points.shape}")
        if not 0 <= self.poison_count <= points.shape[0]:
            raise ValueError(f"poison_count {self.poison_count} out of range")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def filtered(self) -> np.ndarray:
        return self.points[:len(self) - self.poison_count]

    @property
    def fingerprint(self) -> str:
        """sha256 over shape, poison count and the float64 point bytes."""
        digest = hashlib.sha256()
        digest.update(f"{self.points.shape}:{self.poison_count}".encode())
        digest.update(np.ascontiguousarray(self.points, dtype="<f8").tobytes())
        return digest.hexdigest()


def ensemble_votes(models: Sequence[LabelOnlyClassifier], features: np.ndarray) -> np.ndarray:
    """Number of models predicting 1 at each row; labels only."""
    votes = np.zeros(np.atleast_2d(features).shape[0], dtype=np.int64)
    for model in models:
        votes += np.asarray(model.predict_many(features), dtype=np.int64)
    return votes


def ensemble_certainty(models: Sequence[LabelOnlyClassifier], features: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * ensemble_votes(models, features) / len(models)


def within_band(votes: np.ndarray, r: int, band: float = DEFAULT_BAND) -> np.ndarray:
    """|1 - 2 votes / r| <= band, evaluated as |r - 2 votes| <= band * r."""
    return np.abs(r - 2 * np.asarray(votes)) <= band * r + 1e-9


def filter_candidates(models: Sequence[LabelOnlyClassifier], candidates: np.ndarray,
                      band: float = DEFAULT_BAND) -> np.ndarray:
    """Rows of `candidates` on which the ensemble is uncertain."""
    mask = within_band(ensemble_votes(models, candidates), len(models), band)
    return candidates[mask]


def collect_queries(models: Sequence[LabelOnlyClassifier], candidate_source: DistributionSource,
                    q: int, rng: np.random.Generator, band: float = DEFAULT_BAND,
                    budget_factor: int = DEFAULT_BUDGET_FACTOR) -> np.ndarray:
    """Draw candidates in batches until q pass the filter or the budget runs out."""
    budget = budget_factor * q
    accepted = []
    have, drawn = 0, 0
    while have < q:
        if drawn >= budget:
            raise QueryBudgetExhausted(have, q, drawn)
        batch = candidate_source.draw(min(max(q, 64), budget - drawn), rng)
        drawn += len(batch)
        kept = filter_candidates(models, batch.features, band)[:q - have]
        if len(kept):
            accepted.append(kept)
            have += len(kept)
    logger.debug(f"Certainty filter kept {q} of {drawn} candidates")
    return np.vstack(accepted)


def select_queries(r: int, q: int, positive: DistributionSource, negative: DistributionSource,
                   spec: ModelSpec, seed: int, n: int = 1000, band: float = DEFAULT_BAND,
                   budget_factor: int = DEFAULT_BUDGET_FACTOR, poison: Optional[PoisonSet] = None,
                   workers: Optional[int] = None, progress: bool = False) -> QuerySet:
    """Train the certainty ensemble, collect q uncertain points and append the poison."""
    if q < 1:
        raise ValueError(f"query count must be >= 1, got {q}")
    if r < 1:
        raise ValueError(f"ensemble size must be >= 1, got {r}")
    if not 0.0 <= band <= 1.0:
        raise ValueError(f"certainty band must lie in [0, 1], got {band}")

    half = n // 2
    models = train_ensemble(spec, [negative, positive], [half, n - half], r,
                            derive_seed(seed, 0), workers=workers, progress=progress)
    candidates = property_mixture(positive, negative, 0.5)
    points = collect_queries(models, candidates, q, make_rng(derive_seed(seed, 1)),
                             band, budget_factor)

    poison_count = 0
    if poison is not None and len(poison):
        points = np.vstack([points, poison.features])
        poison_count = len(poison)
    queries = QuerySet(points, poison_count)
    logger.info(f"Selected {q} query points (+{poison_count} poison) with r={r}")
    return queries
