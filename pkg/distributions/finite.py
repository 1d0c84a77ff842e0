"""
Finite (exactly enumerable) labeled-instance distributions.

A FiniteDistribution is a list of distinct support points, each carrying a
probability mass and the posterior Pr[Y=1 | X=x]. All operations return new
objects; nothing is mutated after construction.

Text table format (see save_table/load_table):

    # PoisonSnek finite distribution
    # columns: x0..x{d-1} = feature values, mass = Pr[X=x], posterior = Pr[Y=1|X=x]
    x0,x1,...,mass,posterior
    0,1,...,0.125,0.73
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .dataset import DistributionError
from .predicates import PropertyPredicate

logger = logging.getLogger(__name__)

# Simplex / normalization tolerance
PROB_TOL = 1e-12

TABLE_HEADER = (
    "# PoisonSnek finite distribution\n"
    "# columns: x0..x{d-1} = feature values, mass = Pr[X=x], posterior = Pr[Y=1|X=x]\n"
)


class EmptyConditionalError(DistributionError):
    """Conditioning on an event of zero probability."""


class SimplexError(DistributionError):
    """Weights or masses are negative or do not sum to one."""


def _key(x: np.ndarray) -> Tuple[float, ...]:
    return tuple(float(v) for v in x)


class FiniteDistribution:
    """Exact pmf over (X, Y) given as support points, masses and posteriors."""

    def __init__(self, points: np.ndarray, masses: Sequence[float], posteriors: Sequence[float]):
        points = np.array(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        masses = np.array(masses, dtype=float).reshape(-1)
        posteriors = np.array(posteriors, dtype=float).reshape(-1)
        if points.shape[0] == 0:
            raise DistributionError("a finite distribution needs at least one support point")
        if not (points.shape[0] == masses.shape[0] == posteriors.shape[0]):
            raise DistributionError("points, masses and posteriors must have equal length")
        if not np.all(np.isfinite(points)):
            raise DistributionError("support points must be finite")
        if np.any(masses < 0):
            raise SimplexError("masses must be nonnegative")
        total = float(masses.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise SimplexError(f"masses sum to {total!r}, not 1")
        if np.any(posteriors < 0) or np.any(posteriors > 1):
            raise DistributionError("posteriors must lie in [0, 1]")

        index: Dict[Tuple[float, ...], int] = {}
        for i, row in enumerate(points):
            key = _key(row)
            if key in index:
                raise DistributionError(f"duplicate support point {key}")
            index[key] = i

        for arr in (points, masses, posteriors):
            arr.setflags(write=False)
        self._points = points
        self._masses = masses
        self._posteriors = posteriors
        self._index = index

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def masses(self) -> np.ndarray:
        return self._masses

    @property
    def posteriors(self) -> np.ndarray:
        return self._posteriors

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __repr__(self) -> str:
        return f"FiniteDistribution(support={len(self)}, dim={self.dim})"

    def index_of(self, x: np.ndarray) -> int:
        """Position of x in the support; KeyError if absent."""
        key = _key(np.asarray(x, dtype=float).reshape(-1))
        if key not in self._index:
            raise KeyError(f"{key} is not in the support")
        return self._index[key]

    def contains(self, x: np.ndarray) -> bool:
        return _key(np.asarray(x, dtype=float).reshape(-1)) in self._index

    def posterior(self, x: np.ndarray) -> float:
        return float(self._posteriors[self.index_of(x)])

    def mass(self, x: np.ndarray) -> float:
        return float(self._masses[self.index_of(x)])

    def property_mass(self, f: PropertyPredicate) -> float:
        """Pr[f(X) = 1]."""
        return float(self._masses[f.evaluate_many(self._points) == 1].sum())

    def with_posteriors(self, posteriors: Sequence[float]) -> "FiniteDistribution":
        return FiniteDistribution(self._points, self._masses, posteriors)

    def to_source(self, name: str = "finite"):
        """Sampling view of this distribution."""
        from .sources import FiniteSource
        return FiniteSource(self, name=name)

    def save_table(self, path: str) -> None:
        """Write the documented text table (one row per support point)."""
        columns = [f"x{j}" for j in range(self.dim)]
        frame = pd.DataFrame(self._points, columns=columns)
        frame["mass"] = self._masses
        frame["posterior"] = self._posteriors
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(TABLE_HEADER)
            frame.to_csv(handle, index=False, float_format="%.17g")
        logger.debug(f"Wrote {len(self)}-point distribution table to {path}")

    @classmethod
    def load_table(cls, path: str) -> "FiniteDistribution":
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
        missing = {"mass", "posterior"} - set(frame.columns)
        if missing:
            raise DistributionError(f"distribution table {path} lacks columns {sorted(missing)}")
        feature_columns = [c for c in frame.columns if c not in ("mass", "posterior")]
        return cls(frame[feature_columns].to_numpy(dtype=float),
                   frame["mass"].to_numpy(dtype=float),
                   frame["posterior"].to_numpy(dtype=float))


def check_weights(weights: Sequence[float]) -> np.ndarray:
    """Validate a mixture weight vector against the simplex."""
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if weights.size == 0:
        raise SimplexError("a mixture needs at least one component")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise SimplexError(f"mixture weights must be nonnegative, got {weights.tolist()}")
    if abs(float(weights.sum()) - 1.0) > PROB_TOL:
        raise SimplexError(f"mixture weights sum to {float(weights.sum())!r}, not 1")
    return weights


def condition(dist: FiniteDistribution, f: PropertyPredicate, value: int) -> FiniteDistribution:
    """Restrict `dist` to {x : f(x) = value} and renormalize."""
    mask = f.evaluate_many(dist.points) == int(value)
    if mask.all():
        return dist
    mass = float(dist.masses[mask].sum())
    if not mask.any() or mass <= 0.0:
        raise EmptyConditionalError(
            f"empty conditional: Pr[{f.description} = {int(value)}] is zero")
    return FiniteDistribution(dist.points[mask], dist.masses[mask] / mass, dist.posteriors[mask])


def mix_finite(components: Sequence[Tuple[FiniteDistribution, float]]) -> FiniteDistribution:
    """Exact mixture: masses add, posteriors are mass-weighted on shared points."""
    weights = check_weights([w for _, w in components])
    active = [(d, w) for (d, _), w in zip(components, weights) if w > 0]
    if len(active) == 1:
        return active[0][0]
    dims = {d.dim for d, _ in active}
    if len(dims) != 1:
        raise DistributionError(f"cannot mix distributions of dims {sorted(dims)}")

    order: List[Tuple[float, ...]] = []
    mass: Dict[Tuple[float, ...], float] = {}
    positive: Dict[Tuple[float, ...], float] = {}
    first_posterior: Dict[Tuple[float, ...], float] = {}
    for dist, weight in active:
        for x, m, eta in zip(dist.points, dist.masses, dist.posteriors):
            key = _key(x)
            if key not in mass:
                order.append(key)
                mass[key] = 0.0
                positive[key] = 0.0
                first_posterior[key] = float(eta)
            mass[key] += weight * m
            positive[key] += weight * m * eta

    masses = np.array([mass[k] for k in order])
    posteriors = np.array([positive[k] / mass[k] if mass[k] > 0 else first_posterior[k]
                           for k in order])
    total = float(masses.sum())
    if total != 1.0:
        masses = masses / total
    return FiniteDistribution(np.array(order, dtype=float), masses, np.clip(posteriors, 0.0, 1.0))


def poisoned(clean: FiniteDistribution, p: float,
             adversarial: FiniteDistribution) -> FiniteDistribution:
    """(1 - p) * clean + p * adversarial as an exact pmf."""
    if not 0.0 <= p <= 1.0:
        raise DistributionError(f"poison fraction must lie in [0, 1], got {p}")
    return mix_finite([(clean, 1.0 - p), (adversarial, p)])


def adversary_distribution(conditional: FiniteDistribution, label: int) -> FiniteDistribution:
    """Same feature marginal as `conditional`, every label forced to `label`."""
    forced = 1.0 if int(label) == 1 else 0.0
    return conditional.with_posteriors(np.full(len(conditional), forced))


def flip_labels(dist: FiniteDistribution) -> FiniteDistribution:
    """(X, Y) -> (X, 1 - Y)."""
    return dist.with_posteriors(1.0 - dist.posteriors)


def mixture_of_conditionals(positive: FiniteDistribution, negative: FiniteDistribution,
                            t: float) -> FiniteDistribution:
    """D_t = t * D+ + (1 - t) * D-."""
    return mix_finite([(positive, t), (negative, 1.0 - t)])
