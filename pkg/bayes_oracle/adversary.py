"""
Theoretical adversary: query the model on band points and vote.

The adversary draws points from X+ until it holds m = ceil(-ln(delta) / (2 gamma^2))
points inside the certainty band, asks the model for their labels and
guesses t0 when more than half come back 1.
"""

import logging

import numpy as np

from distributions import DistributionSource, PropertyPredicate
from seeding import make_rng

from .theory import TheoremParams, certainty_band, chernoff_query_count

logger = logging.getLogger(__name__)

DEFAULT_BUDGET_FACTOR = 1000


class RejectionBudgetExceeded(RuntimeError):
    """Rejection sampling gave up before collecting enough band points."""

    def __init__(self, accepted: int, wanted: int, drawn: int):
        super().__init__(f"collected {accepted}/{wanted} band points after {drawn} draws")
        self.accepted = accepted
        self.wanted = wanted
        self.drawn = drawn


def sample_band_points(source: DistributionSource, f: PropertyPredicate, params: TheoremParams,
                       count: int, rng: np.random.Generator,
                       budget_factor: int = DEFAULT_BUDGET_FACTOR) -> np.ndarray:
    """Rejection-sample `count` points with f(x) = 1 and crt(x, D) in the band."""
    dist = source.finite
    if dist is None:
        raise ValueError("band sampling needs a finite source to read certainties from")
    low, high = certainty_band(params.p, params.t0, params.t1, params.tau)
    budget = budget_factor * count
    accepted = []
    drawn = 0
    while len(accepted) < count:
        if drawn >= budget:
            raise RejectionBudgetExceeded(len(accepted), count, drawn)
        batch = source.draw(min(count, budget - drawn), rng)
        drawn += len(batch)
        for x in batch.features:
            crt = 1.0 - 2.0 * dist.posterior(x)
            if f(x) == 1 and low < crt <= high:
                accepted.append(x)
                if len(accepted) == count:
                    break
    logger.debug(f"Band sampling accepted {count} of {drawn} draws")
    return np.vstack(accepted)


def theoretical_adversary(model, source: DistributionSource, f: PropertyPredicate,
                          params: TheoremParams, seed: int,
                          budget_factor: int = DEFAULT_BUDGET_FACTOR) -> int:
    """Return 0 (guess t0) iff the mean band prediction exceeds 1/2, else 1 (guess t1)."""
    m = chernoff_query_count(params.delta_n, params.gamma)
    points = sample_band_points(source, f, params, m, make_rng(seed), budget_factor)
    if hasattr(model, "predict_many"):
        answers = np.asarray(model.predict_many(points), dtype=float)
    else:
        answers = np.array([model.predict(x) for x in points], dtype=float)
    rho = float(answers.mean())
    logger.debug(f"Theoretical adversary: m={m}, rho={rho:.3f}")
    return 0 if rho > 0.5 else 1
