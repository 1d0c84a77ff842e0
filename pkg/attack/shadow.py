"""
Shadow models and the linear attack model.

For each hypothesis t in (t0, t1) the adversary trains k shadow targets on
clean data from D_t plus the poison set, records their 0/1 answers on the
query set, and fits an l2-regularised linear separator with weight
2 * sqrt(1 / k) (t1 -> 1, t0 -> 0).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from distributions import DistributionSource, property_mixture
from seeding import derive_seed, make_rng
from target_models import (
    DimensionMismatchError,
    LabelOnlyClassifier,
    ModelSpec,
    train_ensemble,
)
from target_models.sgd import fit, init_layers

from .poison import PoisonSet
from .queries import QuerySet

logger = logging.getLogger(__name__)

ATTACK_EPOCHS = 200


class ArtifactMismatchError(ValueError):
    """An attack model is used with a query set it was not trained on."""


@dataclass(frozen=True)
class ShadowConfig:
    """k shadow models per hypothesis, each trained on clean_size clean points plus poison."""
    k: int
    clean_size: int
    spec: ModelSpec
    seed: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"need at least one shadow model per hypothesis, got k={self.k}")
        if self.clean_size < 0:
            raise ValueError(f"clean size must be nonnegative, got {self.clean_size}")


def attack_l2(k: int) -> float:
    """2 * sqrt(1 / k)."""
    return 2.0 * math.sqrt(1.0 / k)


@dataclass(frozen=True)
class AttackModel:
    """Linear decision over query responses: 1 means t1, 0 means t0."""
    weights: np.ndarray
    intercept: float
    l2: float
    query_fingerprint: str
    degenerate: bool = False
    training_accuracy: float = float("nan")

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def decide(self, responses: np.ndarray) -> np.ndarray:
        """Class decision for each response row; a zero margin decides 1."""
        responses = np.atleast_2d(np.asarray(responses, dtype=float))
        if responses.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"attack model expects {self.dim} responses, got {responses.shape[1]}")
        return (responses @ self.weights + self.intercept >= 0.0).astype(np.int64)


def response_matrix(models: Sequence[LabelOnlyClassifier], queries: QuerySet) -> np.ndarray:
    """Row i holds model i's labels on the queries, in query order."""
    return np.vstack([np.asarray(m.predict_many(queries.points), dtype=np.int64)
                      for m in models])


def fit_attack_model(responses: np.ndarray, hypotheses: np.ndarray, k: int,
                     query_fingerprint: str, seed: int, spec: Optional[ModelSpec] = None,
                     epochs: int = ATTACK_EPOCHS) -> AttackModel:
    """Fit the linear separator on (response vector, hypothesis bit) pairs."""
    responses = np.asarray(responses, dtype=float)
    hypotheses = np.asarray(hypotheses, dtype=np.int64)
    spec = spec or ModelSpec()
    l2 = attack_l2(k)
    layers = init_layers([responses.shape[1], 1], make_rng(seed))
    fit(layers, responses, hypotheses, learning_rate=spec.learning_rate, epochs=epochs,
        batch_size=spec.batch_size, l2=l2, rng=make_rng(derive_seed(seed, 1)))
    W, b = layers[0]

    model = AttackModel(W[:, 0], float(b[0]), l2, query_fingerprint)
    accuracy = float(np.mean(model.decide(responses) == hypotheses))
    informative = bool(np.any(responses.min(axis=0) != responses.max(axis=0)))
    degenerate = not informative or accuracy <= 0.5
    if degenerate:
        logger.warning(f"Attack model is degenerate (training accuracy {accuracy:.3f}); "
                       "its guesses are at chance")
    return AttackModel(W[:, 0], float(b[0]), l2, query_fingerprint, degenerate, accuracy)


def train_shadow_models(cfg: ShadowConfig, poison: PoisonSet, t: float,
                        positive: DistributionSource, negative: DistributionSource,
                        seed: int, workers: Optional[int] = None, progress: bool = False):
    """k targets trained on clean_size points from D_t plus the poison set."""
    source = property_mixture(positive, negative, t)
    return train_ensemble(cfg.spec, [source], [cfg.clean_size], cfg.k, seed,
                          workers=workers, progress=progress, extra=poison.examples)


def train_attack_model(cfg: ShadowConfig, poison: PoisonSet, queries: QuerySet, t0: float,
                       t1: float, positive: DistributionSource, negative: DistributionSource,
                       seed: Optional[int] = None, workers: Optional[int] = None,
                       progress: bool = False) -> AttackModel:
    """Train 2k shadow models and fit the attack model on their responses."""
    seed = cfg.seed if seed is None else seed
    blocks = []
    for bit, t in enumerate((t0, t1)):
        shadows = train_shadow_models(cfg, poison, t, positive, negative,
                                      derive_seed(seed, bit), workers, progress)
        logger.debug(f"Trained {cfg.k} shadow models for t={t:g}")
        blocks.append(response_matrix(shadows, queries))

    responses = np.vstack(blocks)
    hypotheses = np.repeat([0, 1], cfg.k)
    model = fit_attack_model(responses, hypotheses, cfg.k, queries.fingerprint,
                             derive_seed(seed, 2), cfg.spec)
    logger.info(f"Trained attack model on {2 * cfg.k} shadow models "
                f"(l2={model.l2:.4f}, training accuracy {model.training_accuracy:.3f})")
    return model


def infer(attack_model: AttackModel, target: LabelOnlyClassifier, queries: QuerySet) -> int:
    """Query the target on every point and return the attack model's bit."""
    if attack_model.query_fingerprint != queries.fingerprint:
        raise ArtifactMismatchError("attack model was trained on a different query set")
    if attack_model.dim != len(queries):
        raise DimensionMismatchError(
            f"attack model expects {attack_model.dim} queries, got {len(queries)}")
    responses = np.asarray(target.predict_many(queries.points), dtype=np.int64)
    return int(attack_model.decide(responses[None, :])[0])
