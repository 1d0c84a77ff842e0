"""
Sampling sources for labeled examples.

Every source honours one contract: `draw(n, rng)` returns n i.i.d. labeled
examples and consumes randomness only from the generator it is handed.
Finite sources also expose the exact pmf through `.finite`.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from seeding import make_rng

from .dataset import Dataset, DistributionError
from .finite import EmptyConditionalError, FiniteDistribution, check_weights, mix_finite

logger = logging.getLogger(__name__)


class DistributionSource:
    """Base class: seeded sampling access to a distribution over (X, Y)."""

    kind = "generative"

    def __init__(self, dim: int, name: str = "source"):
        self.dim = int(dim)
        self.name = name

    @property
    def finite(self) -> Optional[FiniteDistribution]:
        """Exact pmf when this source is enumerable, else None."""
        return None

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, dim={self.dim})"


class FiniteSource(DistributionSource):
    """Samples support points by mass, then labels by the posterior."""

    kind = "finite"

    def __init__(self, dist: FiniteDistribution, name: str = "finite"):
        super().__init__(dist.dim, name)
        self._dist = dist
        self._cdf = np.cumsum(dist.masses)
        self._cdf[-1] = 1.0

    @property
    def finite(self) -> FiniteDistribution:
        return self._dist

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        idx = np.searchsorted(self._cdf, rng.random(n), side="right")
        idx = np.minimum(idx, len(self._dist) - 1)
        labels = (rng.random(n) < self._dist.posteriors[idx]).astype(np.int64)
        return Dataset(self._dist.points[idx], labels, dim=self.dim)


class GenerativeSource(DistributionSource):
    """Wraps a sampler callable `(n, rng) -> (features, labels)`."""

    def __init__(self, sampler: Callable[[int, np.random.Generator], Tuple[np.ndarray, np.ndarray]],
                 dim: int, name: str = "generative"):
        super().__init__(dim, name)
        self._sampler = sampler

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        features, labels = self._sampler(n, rng)
        return Dataset(features, labels, dim=self.dim)


class EmpiricalSource(DistributionSource):
    """Resamples rows of a dataset with replacement."""

    def __init__(self, rows: Dataset, name: str = "empirical"):
        if len(rows) == 0:
            raise EmptyConditionalError(f"empty conditional source {name!r}: no rows to resample")
        super().__init__(rows.dim, name)
        self.rows = rows

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        return self.rows.subset(rng.integers(0, len(self.rows), size=n))


class AppendedFeatureSource(DistributionSource):
    """Base source with one constant coordinate appended to every instance."""

    def __init__(self, base: DistributionSource, value: float, name: str = "appended"):
        super().__init__(base.dim + 1, name)
        self.base = base
        self.value = float(value)
        self.kind = base.kind
        self._finite = None
        if base.finite is not None:
            pts = base.finite.points
            column = np.full((pts.shape[0], 1), self.value)
            self._finite = FiniteDistribution(np.hstack([pts, column]),
                                              base.finite.masses, base.finite.posteriors)

    @property
    def finite(self) -> Optional[FiniteDistribution]:
        return self._finite

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        data = self.base.draw(n, rng)
        column = np.full((len(data), 1), self.value)
        return Dataset(np.hstack([data.features, column]), data.labels, dim=self.dim)


@dataclass(frozen=True)
class MixtureSpec:
    """Weighted components of a mixture; weights must lie on the simplex."""
    components: Tuple[Tuple[DistributionSource, float], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.components], dtype=float)

    @classmethod
    def of(cls, *pairs: Tuple[DistributionSource, float]) -> "MixtureSpec":
        return cls(tuple(pairs))


class MixtureSource(DistributionSource):
    """Draws component i with probability w_i, then samples that component."""

    def __init__(self, spec: MixtureSpec, name: str = "mixture"):
        weights = check_weights(spec.weights)
        sources = [s for s, _ in spec.components]
        dims = {s.dim for s in sources}
        if len(dims) != 1:
            raise DistributionError(f"mixture components have dims {sorted(dims)}")
        super().__init__(sources[0].dim, name)
        self.sources: List[DistributionSource] = sources
        self.weights = weights
        self._finite = None
        if all(s.finite is not None for s in sources):
            self.kind = "finite"
            self._finite = mix_finite([(s.finite, w) for s, w in zip(sources, weights)])

    @property
    def finite(self) -> Optional[FiniteDistribution]:
        return self._finite

    def draw(self, n: int, rng: np.random.Generator) -> Dataset:
        choice = rng.choice(len(self.sources), size=n, p=self.weights)
        features = np.zeros((n, self.dim))
        labels = np.zeros(n, dtype=np.int64)
        for i, src in enumerate(self.sources):
            slots = np.flatnonzero(choice == i)
            if slots.size == 0:
                continue
            part = src.draw(slots.size, rng)
            features[slots] = part.features
            labels[slots] = part.labels
        return Dataset(features, labels, dim=self.dim)


def mix(spec: MixtureSpec) -> DistributionSource:
    """Mixture source; finite components also yield the exact mixed pmf."""
    return MixtureSource(spec)


def property_mixture(positive: DistributionSource, negative: DistributionSource,
                     t: float) -> DistributionSource:
    """D_t = t * D+ + (1 - t) * D-."""
    return MixtureSource(MixtureSpec.of((positive, t), (negative, 1.0 - t)), name=f"D_{t:g}")


def sample(src: DistributionSource, n: int, seed: int) -> Dataset:
    """n i.i.d. examples from `src`; deterministic given `seed`."""
    if n < 0:
        raise DistributionError(f"sample size must be nonnegative, got {n}")
    if n == 0:
        return Dataset(np.zeros((0, src.dim)), np.zeros(0), dim=src.dim)
    return src.draw(int(n), make_rng(seed))


def sample_many(sources: Sequence[DistributionSource], sizes: Sequence[int],
                rng: np.random.Generator) -> Dataset:
    """Concatenate exact-size draws from several sources (balanced ensembles)."""
    parts = [src.draw(int(size), rng) for src, size in zip(sources, sizes)]
    return Dataset.concat(*parts)
