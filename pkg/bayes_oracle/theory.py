"""
Closed forms for the poisoned posterior, the certainty thresholds and the
band conditions under which a near Bayes-optimal learner leaks t.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from distributions import FiniteDistribution, PropertyPredicate

from .oracle import Classifier, certainties, predictions_on_support


class DegenerateParameterError(ValueError):
    """Parameters for which a closed form is undefined."""


@dataclass(frozen=True)
class TheoremParams:
    """Scenario parameters: poison rate, candidate rates, margins and learner bounds."""
    p: float
    t0: float
    t1: float
    tau: float = 0.0
    gamma: float = 0.1
    epsilon_n: float = 0.0
    delta_n: float = 0.01

    def __post_init__(self):
        if not 0.0 <= self.t0 < self.t1 <= 1.0:
            raise DegenerateParameterError(f"need 0 <= t0 < t1 <= 1, got t0={self.t0}, t1={self.t1}")
        if not 0.0 <= self.p <= 1.0:
            raise DegenerateParameterError(f"poison fraction must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.tau <= 1.0:
            raise DegenerateParameterError(f"tau must lie in [0, 1], got {self.tau}")
        if not 0.0 <= self.gamma <= 0.5:
            raise DegenerateParameterError(f"gamma must lie in [0, 0.5], got {self.gamma}")
        if self.epsilon_n < 0 or not 0.0 <= self.delta_n <= 1.0:
            raise DegenerateParameterError("epsilon_n must be >= 0 and delta_n in [0, 1]")


def poisoned_posterior(p: float, t: float, clean_posterior: float) -> float:
    """Posterior of the poisoned mixture at a point with f(x) = 1 when D_A = (X+, 1)."""
    if not 0.0 <= p <= 1.0 or not 0.0 <= t <= 1.0:
        raise DegenerateParameterError(f"p and t must lie in [0, 1], got p={p}, t={t}")
    denom = p + t * (1.0 - p)
    if denom <= 0.0:
        raise DegenerateParameterError("p = 0 and t = 0 leave the poisoned posterior undefined")
    return p / denom + (t * (1.0 - p) / denom) * clean_posterior


def certainty_threshold(p: float, t: float, tau: float) -> float:
    """crt(x) <= threshold  iff  poisoned posterior >= 1/2 + tau*t / (p + t(1-p))."""
    if t <= 0.0 or p >= 1.0:
        raise DegenerateParameterError(f"threshold needs t > 0 and p < 1, got t={t}, p={p}")
    return (p - 2.0 * tau * t) / (t * (1.0 - p))


def poisoned_margin(p: float, t: float, tau: float) -> float:
    """Posterior level 1/2 + tau*t / (p + t(1-p)) matching the certainty threshold."""
    return 0.5 + tau * t / (p + t * (1.0 - p))


def certainty_band(p: float, t0: float, t1: float, tau: float) -> Tuple[float, float]:
    """(low, high) of the band low < crt <= high; t0 = 0 leaves it open above."""
    if p >= 1.0:
        raise DegenerateParameterError("the band is undefined at p = 1")
    low = (p + 2.0 * tau * t1) / (t1 * (1.0 - p))
    high = math.inf if t0 == 0.0 else certainty_threshold(p, t0, tau)
    return low, high


def band_mask(dist: FiniteDistribution, f: PropertyPredicate, params: TheoremParams) -> np.ndarray:
    low, high = certainty_band(params.p, params.t0, params.t1, params.tau)
    crt = certainties(dist)
    return (f.evaluate_many(dist.points) == 1) & (crt > low) & (crt <= high)


def band_mass(dist: FiniteDistribution, f: PropertyPredicate, params: TheoremParams) -> float:
    """Pr_X[f(x) = 1 and crt(x) in the band]."""
    return float(dist.masses[band_mask(dist, f, params)].sum())


def band_mass_sufficient(mass: float, params: TheoremParams) -> bool:
    """mass > 2*eps/tau; with eps = 0 this is strictly positive mass."""
    if params.epsilon_n == 0.0:
        return mass > 0.0
    if params.tau == 0.0:
        return False
    return mass > 2.0 * params.epsilon_n / params.tau


def band_mass_sufficient_noisy(mass: float, params: TheoremParams) -> bool:
    """mass >= eps / (tau (1 - 2 gamma)); the general-gamma form of the band condition."""
    if params.epsilon_n == 0.0:
        return mass > 0.0
    scale = params.tau * (1.0 - 2.0 * params.gamma)
    if scale <= 0.0:
        return False
    return mass >= params.epsilon_n / scale


def band_prediction_rate(h: Classifier, dist: FiniteDistribution, f: PropertyPredicate,
                         params: TheoremParams) -> float:
    """Pr_{x <- X | band}[h(x) = 1], computed exactly."""
    mask = band_mask(dist, f, params)
    mass = float(dist.masses[mask].sum())
    if mass <= 0.0:
        raise DegenerateParameterError("the certainty band carries no mass")
    labels = predictions_on_support(h, dist)
    return float(np.sum(dist.masses[mask] * labels[mask]) / mass)


def chernoff_query_count(delta: float, gamma: float) -> int:
    """m = ceil(-ln(delta) / (2 gamma^2))."""
    if not 0.0 < delta < 1.0:
        raise DegenerateParameterError(f"delta must lie in (0, 1), got {delta}")
    if not 0.0 < gamma <= 0.5:
        raise DegenerateParameterError(f"gamma must lie in (0, 0.5], got {gamma}")
    return int(math.ceil(-math.log(delta) / (2.0 * gamma * gamma)))
