"""
Theory verification suite.

Each check enumerates exact distributions and compares a closed form
against brute force. Results are reported as rows of
(check, parameters, max_residual, passed) and can be written as CSV.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from distributions import (
    FiniteDistribution,
    PropertyPredicate,
    adversary_distribution,
    condition,
    feature_predicate,
    mixture_of_conditionals,
    poisoned,
)
from seeding import derive_seed, make_rng

from .oracle import TableClassifier, all_label_risks, bayes_optimal, risk, risk_decomposition_check
from .theory import (
    TheoremParams,
    band_mass,
    band_mass_sufficient,
    band_prediction_rate,
    certainty_band,
    certainty_threshold,
    poisoned_margin,
    poisoned_posterior,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12
REPORT_COLUMNS = ["check", "parameters", "max_residual", "passed"]


@dataclass(frozen=True)
class CheckResult:
    check: str
    parameters: str
    max_residual: float
    passed: bool


def random_distribution(rng: np.random.Generator, size: int, dim: Optional[int] = None) -> FiniteDistribution:
    """Random pmf over `size` distinct binary points (last coordinate is the property)."""
    dim = dim or max(1, int(np.ceil(np.log2(size))))
    codes = rng.choice(2 ** dim, size=size, replace=False)
    points = ((codes[:, None] >> np.arange(dim)) & 1).astype(float)
    masses = rng.dirichlet(np.ones(size))
    masses = masses / masses.sum()
    return FiniteDistribution(points, masses, rng.random(size))


def build_band_distribution(params: TheoremParams, seed: int = 0,
                            bits: int = 3) -> Tuple[FiniteDistribution, PropertyPredicate]:
    """Finite D whose f = 1 half puts mass inside the certainty band.

    Points are `bits` binary features plus a trailing property bit; half the
    f = 1 points sit inside the band, the rest (and all f = 0 points) are
    arbitrary.
    """
    rng = make_rng(seed)
    low, high = certainty_band(params.p, params.t0, params.t1, params.tau)
    if not low < high:
        raise ValueError(f"empty certainty band ({low:.4f}, {high:.4f}]")
    high = min(high, 1.0)
    count = 2 ** bits
    codes = np.arange(count)
    base = ((codes[:, None] >> np.arange(bits)) & 1).astype(float)
    band_crt = low + (high - low) * np.linspace(0.25, 0.75, count // 2)
    outside = rng.choice([0.05, 0.95], size=count - count // 2)
    positive_eta = np.concatenate([(1.0 - band_crt) / 2.0, outside])
    negative_eta = rng.random(count)
    points = np.vstack([np.hstack([base, np.ones((count, 1))]),
                        np.hstack([base, np.zeros((count, 1))])])
    masses = np.full(2 * count, 1.0 / (2 * count))
    dist = FiniteDistribution(points, masses, np.concatenate([positive_eta, negative_eta]))
    return dist, feature_predicate(bits)


def _posterior_equivalence(seed: int) -> CheckResult:
    rng = make_rng(seed)
    f = feature_predicate(4)
    base = random_distribution(rng, 24, dim=5)
    while base.property_mass(f) in (0.0, 1.0):
        base = random_distribution(rng, 24, dim=5)
    positive, negative = condition(base, f, 1), condition(base, f, 0)
    worst, count = 0.0, 0
    for p in np.round(np.arange(0.0, 0.501, 0.05), 2):
        for t in np.round(np.arange(0.1, 0.901, 0.1), 1):
            clean = mixture_of_conditionals(positive, negative, t)
            tilde = poisoned(clean, p, adversary_distribution(condition(clean, f, 1), 1))
            for x, eta in zip(positive.points, positive.posteriors):
                worst = max(worst, abs(tilde.posterior(x) - poisoned_posterior(p, t, eta)))
                count += 1
            for x, eta in zip(negative.points, negative.posteriors):
                worst = max(worst, abs(tilde.posterior(x) - eta))
    return CheckResult("posterior_equivalence", f"grid_points={count}", worst, worst <= RESIDUAL_TOL)


def _threshold_biconditional(seed: int) -> CheckResult:
    rng = make_rng(seed)
    mismatches, count = 0, 0
    for p in np.round(np.arange(0.0, 0.501, 0.05), 2):
        for t in np.round(np.arange(0.1, 0.901, 0.1), 1):
            for tau in (0.0, 0.05, 0.1, 0.25):
                for eta in rng.random(6):
                    lhs = poisoned_posterior(p, t, eta) >= poisoned_margin(p, t, tau)
                    rhs = (1.0 - 2.0 * eta) <= certainty_threshold(p, t, tau)
                    mismatches += int(lhs != rhs)
                    count += 1
    return CheckResult("threshold_biconditional", f"grid_points={count}",
                       float(mismatches), mismatches == 0)


def _risk_decomposition_residual(seed: int, pairs: int = 1000) -> CheckResult:
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        dist = random_distribution(rng, int(rng.integers(2, 21)), dim=5)
        table = {tuple(x): int(b) for x, b in zip(dist.points, rng.integers(0, 2, len(dist)))}
        worst = max(worst, abs(risk_decomposition_check(TableClassifier(table), dist).residual))
    return CheckResult("risk_decomposition_residual", f"pairs={pairs}", worst, worst <= RESIDUAL_TOL)


def _bayes_optimality(seed: int, trials: int = 100) -> CheckResult:
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(trials):
        dist = random_distribution(rng, int(rng.integers(1, 13)), dim=4)
        gap = risk(bayes_optimal(dist), dist) - float(all_label_risks(dist).min())
        worst = max(worst, gap)
    return CheckResult("bayes_optimality", f"distributions={trials},max_support=12",
                       worst, worst <= RESIDUAL_TOL)


def _band_adversary_behaviour(seed: int) -> CheckResult:
    params = TheoremParams(p=0.1, t0=0.3, t1=0.7, tau=0.0, gamma=0.1)
    dist, f = build_band_distribution(params, seed)
    if not band_mass_sufficient(band_mass(dist, f, params), params):
        return CheckResult("band_adversary_behaviour", "band mass is zero", 1.0, False)
    positive, negative = condition(dist, f, 1), condition(dist, f, 0)
    shortfall = 0.0
    for t, want_high in ((params.t0, True), (params.t1, False)):
        clean = mixture_of_conditionals(positive, negative, t)
        tilde = poisoned(clean, params.p, adversary_distribution(positive, 1))
        rate = band_prediction_rate(bayes_optimal(tilde), dist, f, params)
        gap = (0.5 + params.gamma) - rate if want_high else rate - (0.5 - params.gamma)
        shortfall = max(shortfall, gap, 0.0)
    return CheckResult("band_adversary_behaviour", "p=0.1,t0=0.3,t1=0.7,tau=0,gamma=0.1",
                       shortfall, shortfall == 0.0)


def _posterior_monotonicity(seed: int) -> CheckResult:
    rng = make_rng(seed)
    ps = np.linspace(0.0, 1.0, 41)
    worst = 0.0
    for t in np.round(np.arange(0.1, 0.901, 0.1), 1):
        for eta in rng.random(10):
            values = np.array([poisoned_posterior(p, t, eta) for p in ps])
            worst = max(worst, float(np.max(np.maximum(values[:-1] - values[1:], 0.0))))
    return CheckResult("posterior_monotonicity", "p in [0, 1] step 0.025", worst, worst <= RESIDUAL_TOL)


CHECKS: List[Tuple[str, Callable[[int], CheckResult]]] = [
    ("posterior_equivalence", _posterior_equivalence),
    ("threshold_biconditional", _threshold_biconditional),
    ("risk_decomposition_residual", _risk_decomposition_residual),
    ("bayes_optimality", _bayes_optimality),
    ("band_adversary_behaviour", _band_adversary_behaviour),
    ("posterior_monotonicity", _posterior_monotonicity),
]


def run_theory_suite(seed: int = 0, workers: int = 1) -> List[CheckResult]:
    """Run every check; results keep the CHECKS order."""
    start = time.time()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(check, derive_seed(seed, i)) for i, (_, check) in enumerate(CHECKS)]
        results = [fut.result() for fut in futures]
    for result in results:
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{result.check}: max_residual={result.max_residual:.3g} "
                          f"{'PASS' if result.passed else 'FAIL'}")
    logger.info(f"Theory suite finished in {time.time() - start:.1f}s")
    return results


def write_report(results: List[CheckResult], path: str) -> None:
    frame = pd.DataFrame([asdict(r) for r in results], columns=REPORT_COLUMNS)
    frame.to_csv(path, index=False)
