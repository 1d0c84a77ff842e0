"""
Synthetic tabular tasks.

Features are independent: Bernoulli binary columns, one-hot categorical
blocks and standard-normal continuous columns. Labels follow
Pr[Y = 1 | x] = sigmoid((w . x + b) / temperature) with w drawn from the
spec seed and b centring the logits. Tasks without continuous features are
enumerated exactly, which gives exact posteriors and Bayes error.

The property is either an existing binary feature (`property_index`) or a
random Bernoulli(`property_rate`) feature appended as the last coordinate,
independent of everything else.
"""

import itertools
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit
from scipy.stats import entropy

from bayes_oracle import bayes_error
from distributions import (
    AppendedFeatureSource,
    DistributionError,
    DistributionSource,
    EmptyConditionalError,
    FiniteDistribution,
    GenerativeSource,
    PropertyPredicate,
    condition,
    feature_predicate,
    mix_finite,
    property_mixture,
)
from seeding import derive_seed, make_rng

logger = logging.getLogger(__name__)

MAX_SUPPORT = 2 ** 20
CALIBRATION_SAMPLES = 20000


@dataclass(frozen=True)
class SyntheticSpec:
    binary: int = 8
    categorical: Tuple[int, ...] = ()
    continuous: int = 0
    feature_rate: float = 0.5
    temperature: Optional[float] = None
    target_bayes_error: float = 0.15
    weight_scale: float = 1.0
    property_index: Optional[int] = None
    property_rate: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "categorical", tuple(int(c) for c in self.categorical))
        if self.binary < 0 or self.continuous < 0 or any(c < 2 for c in self.categorical):
            raise ValueError("feature counts must be nonnegative and categories >= 2")
        if self.base_dim == 0:
            raise ValueError("a synthetic task needs at least one feature")
        if not 0.0 <= self.feature_rate <= 1.0:
            raise ValueError(f"feature_rate must lie in [0, 1], got {self.feature_rate}")
        if self.temperature is not None and self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not 0.0 < self.target_bayes_error < 0.5:
            raise ValueError(f"target Bayes error must lie in (0, 0.5), got {self.target_bayes_error}")
        if self.property_index is not None and not 0 <= self.property_index < self.binary:
            raise ValueError(f"property_index must name a binary feature (0..{self.binary - 1})")
        if self.property_index is None and not 0.0 < self.property_rate < 1.0:
            raise ValueError(f"property_rate must lie in (0, 1), got {self.property_rate}")

    @property
    def base_dim(self) -> int:
        return self.binary + sum(self.categorical) + self.continuous

    @property
    def is_finite(self) -> bool:
        return self.continuous == 0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["categorical"] = list(self.categorical)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SyntheticSpec":
        data = dict(data)
        data["categorical"] = tuple(data.get("categorical", ()))
        return cls(**data)


@dataclass(frozen=True)
class SyntheticTask:
    """Property conditionals of a generated task, with the exact pmf when finite."""
    spec: SyntheticSpec
    positive: DistributionSource
    negative: DistributionSource
    f: PropertyPredicate
    weights: np.ndarray
    bias: float
    temperature: float
    finite: Optional[FiniteDistribution] = None

    @property
    def dim(self) -> int:
        return self.positive.dim

    def mixture(self, t: float) -> DistributionSource:
        return property_mixture(self.positive, self.negative, t)

    @property
    def bayes_error(self) -> float:
        if self.finite is None:
            raise DistributionError("Bayes error is only exact for finite tasks")
        return bayes_error(self.finite)


def _posteriors(logits: np.ndarray, temperature: float) -> np.ndarray:
    if temperature == 0.0:
        return (logits >= 0.0).astype(float)
    return expit(logits / temperature)


def _enumerate(spec: SyntheticSpec) -> Tuple[np.ndarray, np.ndarray]:
    """All finite feature vectors and their masses."""
    size = (2 ** spec.binary) * int(np.prod(spec.categorical or (1,)))
    if size > MAX_SUPPORT:
        raise ValueError(f"support of {size} points is too large to enumerate")
    blocks = [[(0.0,), (1.0,)]] * spec.binary
    block_mass = [[1.0 - spec.feature_rate, spec.feature_rate]] * spec.binary
    for c in spec.categorical:
        blocks.append([tuple(float(i == j) for i in range(c)) for j in range(c)])
        block_mass.append([1.0 / c] * c)
    points, masses = [], []
    for combo in itertools.product(*[range(len(b)) for b in blocks]):
        points.append(np.concatenate([blocks[i][j] for i, j in enumerate(combo)]))
        masses.append(np.prod([block_mass[i][j] for i, j in enumerate(combo)]))
    masses = np.array(masses)
    keep = masses > 0
    return np.array(points)[keep], masses[keep] / masses[keep].sum()


def _draw_features(spec: SyntheticSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    parts = [(rng.random((n, spec.binary)) < spec.feature_rate).astype(float)]
    for c in spec.categorical:
        parts.append(np.eye(c)[rng.integers(0, c, size=n)])
    parts.append(rng.standard_normal((n, spec.continuous)))
    return np.hstack(parts)


def _expected_features(spec: SyntheticSpec) -> np.ndarray:
    parts = [np.full(spec.binary, spec.feature_rate)]
    parts.extend(np.full(c, 1.0 / c) for c in spec.categorical)
    parts.append(np.zeros(spec.continuous))
    return np.concatenate(parts)


def calibrate_temperature(logits: np.ndarray, masses: np.ndarray, target: float) -> float:
    """Temperature whose Bayes error sum(m * min(eta, 1 - eta)) equals `target`."""
    def gap(temperature: float) -> float:
        eta = expit(logits / temperature)
        return float(np.sum(masses * np.minimum(eta, 1.0 - eta))) - target

    low, high = 1e-6, 1e6
    if gap(low) > 0:
        raise ValueError(f"Bayes error {target} is below what any temperature reaches")
    return float(brentq(gap, low, high, xtol=1e-12))


def inject_random_feature(source: DistributionSource,
                          rate: float) -> Tuple[DistributionSource, DistributionSource]:
    """(D+, D-) for an independent Bernoulli(rate) feature appended to `source`."""
    if not 0.0 < rate < 1.0:
        raise ValueError(f"injected feature rate must lie in (0, 1), got {rate}")
    return (AppendedFeatureSource(source, 1.0, name="D+"),
            AppendedFeatureSource(source, 0.0, name="D-"))


def injected_feature_information(dist: FiniteDistribution) -> float:
    """Exact mutual information (nats) between the last coordinate and (other features, label)."""
    rows: Dict[Tuple[Tuple[float, ...], int], int] = {}
    cols: Dict[float, int] = {}
    cells = []
    for x, m, eta in zip(dist.points, dist.masses, dist.posteriors):
        z = float(x[-1])
        cols.setdefault(z, len(cols))
        for y, py in ((1, eta), (0, 1.0 - eta)):
            key = (tuple(float(v) for v in x[:-1]), y)
            rows.setdefault(key, len(rows))
            cells.append((rows[key], cols[z], m * py))
    joint = np.zeros((len(rows), len(cols)))
    for i, j, mass in cells:
        joint[i, j] += mass
    info = entropy(joint.sum(axis=1)) + entropy(joint.sum(axis=0)) - entropy(joint.ravel())
    return max(0.0, float(info))


def _conditional_sampler(base: GenerativeSource, f: PropertyPredicate, value: int):
    def draw(n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        features, labels = [], []
        have = 0
        for _ in range(1000):
            if have >= n:
                break
            batch = base.draw(max(2 * n, 64), rng)
            keep = f.evaluate_many(batch.features) == value
            features.append(batch.features[keep])
            labels.append(batch.labels[keep])
            have += int(keep.sum())
        if have < n:
            raise EmptyConditionalError(f"could not draw {n} points with {f.description} = {value}")
        return np.vstack(features)[:n], np.concatenate(labels)[:n]
    return draw


def generate_synthetic(spec: SyntheticSpec) -> SyntheticTask:
    """Build the task's property conditionals; deterministic given its settings."""
    rng = make_rng(derive_seed(spec.seed, 0))
    weights = rng.normal(0.0, spec.weight_scale, size=spec.base_dim)
    bias = -float(_expected_features(spec) @ weights)

    if spec.is_finite:
        points, masses = _enumerate(spec)
    else:
        points = _draw_features(spec, CALIBRATION_SAMPLES, make_rng(derive_seed(spec.seed, 1)))
        masses = np.full(points.shape[0], 1.0 / points.shape[0])
    logits = points @ weights + bias
    temperature = spec.temperature
    if temperature is None:
        temperature = calibrate_temperature(logits, masses, spec.target_bayes_error)
        logger.info(f"Calibrated temperature {temperature:.4f} for Bayes error "
                    f"{spec.target_bayes_error}")

    if spec.is_finite:
        base_finite = FiniteDistribution(points, masses, _posteriors(logits, temperature))
        base: DistributionSource = base_finite.to_source("synthetic")
    else:
        base_finite = None

        def draw(n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
            x = _draw_features(spec, n, rng)
            eta = _posteriors(x @ weights + bias, temperature)
            return x, (rng.random(n) < eta).astype(np.int64)

        base = GenerativeSource(draw, spec.base_dim, name="synthetic")

    if spec.property_index is None:
        f = feature_predicate(spec.base_dim)
        positive, negative = inject_random_feature(base, spec.property_rate)
        finite = None
        if base_finite is not None:
            finite = mix_finite([(positive.finite, spec.property_rate),
                                 (negative.finite, 1.0 - spec.property_rate)])
    else:
        f = feature_predicate(spec.property_index)
        finite = base_finite
        if base_finite is not None:
            positive = condition(base_finite, f, 1).to_source("D+")
            negative = condition(base_finite, f, 0).to_source("D-")
        else:
            positive = GenerativeSource(_conditional_sampler(base, f, 1), base.dim, name="D+")
            negative = GenerativeSource(_conditional_sampler(base, f, 0), base.dim, name="D-")

    logger.debug(f"Generated synthetic task: dim={positive.dim}, property {f.description}")
    return SyntheticTask(spec, positive, negative, f, weights, bias, temperature, finite)
