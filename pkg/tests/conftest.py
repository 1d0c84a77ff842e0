"""Shared fixtures: small exact distributions, a fast synthetic task and game."""

import pytest

from bayes_oracle import TheoremParams, build_band_distribution
from data_io import SyntheticSpec, generate_synthetic
from distributions import FiniteDistribution, feature_predicate
from game import GameConfig
from target_models import ModelSpec


@pytest.fixture
def four_point():
    """(a, property) pairs: two f=1 points and two f=0 points."""
    points = [[0.0, 1.0], [1.0, 1.0], [0.0, 0.0], [1.0, 0.0]]
    return FiniteDistribution(points, [0.1, 0.2, 0.3, 0.4], [0.9, 0.2, 0.5, 0.7])


@pytest.fixture
def prop():
    return feature_predicate(1)


@pytest.fixture
def band_setup():
    params = TheoremParams(p=0.1, t0=0.3, t1=0.7)
    dist, f = build_band_distribution(params, seed=0)
    return params, dist, f


@pytest.fixture(scope="session")
def small_task():
    return generate_synthetic(SyntheticSpec(binary=4, seed=3))


@pytest.fixture(scope="session")
def fast_spec():
    return ModelSpec(epochs=10)


@pytest.fixture
def fast_game(small_task, fast_spec):
    return GameConfig(small_task.positive, small_task.negative, small_task.f, spec=fast_spec,
                      n=120, p=0.1, t0=0.3, t1=0.7, r=3, q=10, k=4, trials=4, test_size=50,
                      workers=1, band=1.0, seed=11)
