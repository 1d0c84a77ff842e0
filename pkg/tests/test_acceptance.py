"""Desk-scale end-to-end runs of the attack. Minutes each; run with ``-m slow``."""

from dataclasses import replace

import pandas as pd
import pytest

from bayes_oracle import TheoremParams, build_band_distribution
from data_io import ExperimentConfig, build_game
from distributions import condition
from game import (
    OracleGameConfig,
    build_poison,
    experiment_frame,
    run_experiment,
    run_oracle_experiment,
    sweep,
)

pytestmark = pytest.mark.slow


def desk_game(**overrides):
    """Default synthetic task: injected random property, logistic target, n=1000, p=0.1."""
    return replace(build_game(ExperimentConfig()), **overrides)


def test_poisoned_attack_beats_ninety_percent():
    result = run_experiment(desk_game(trials=100))
    assert result.invalid == 0
    assert result.accuracy >= 0.9


def test_no_poison_is_near_chance():
    result = run_experiment(desk_game(p=0.0, trials=100))
    assert 0.4 <= result.accuracy <= 0.65


def test_oracle_wins_each_hypothesis():
    params = TheoremParams(p=0.1, t0=0.3, t1=0.7)
    dist, f = build_band_distribution(params, seed=0)
    cfg = OracleGameConfig(condition(dist, f, 1), condition(dist, f, 0), f, params, trials=200,
                           seed=0)
    result = run_oracle_experiment(cfg)
    for bit in (0, 1):
        hits = [r.win for r in result.records if r.bit == bit]
        assert sum(hits) >= 0.98 * len(hits)


def test_more_shadow_models_help():
    outcome = sweep(desk_game(p=0.03), "shadow_count", [50, 500])
    assert outcome.accuracy(500) >= outcome.accuracy(50)


def test_over_poisoning_hurts_a_weak_signal():
    outcome = sweep(desk_game(t0=0.45, t1=0.55), "poison_rate", [0.05, 0.1, 0.2, 0.3, 0.5])
    peak = max(outcome.accuracy(p) for p in (0.05, 0.1, 0.2, 0.3))
    assert outcome.accuracy(0.5) <= peak - 0.05


def test_poisoned_targets_stay_accurate():
    clean = run_experiment(desk_game(p=0.0, trials=20))
    poisoned = run_experiment(desk_game(trials=20))
    assert poisoned.mean_model_accuracy >= clean.mean_model_accuracy - 0.1


def test_poison_moves_recall_toward_its_label():
    clean = desk_game(t0=0.2, t1=0.6, p=0.0, trials=40)
    poisoned = replace(clean, p=0.1)
    label = build_poison(poisoned, seed=0).variant.label
    before = run_experiment(clean, adversary=lambda box: 0).mean_recall
    after = run_experiment(poisoned, adversary=lambda box: 0).mean_recall
    if label == 1:
        assert after >= before
    else:
        assert after <= before


def test_attack_accuracy_grows_with_poison_rate():
    rates = [0.0, 0.05, 0.1, 0.2]
    outcome = sweep(desk_game(trials=60), "poison_rate", rates)
    accuracies = [outcome.accuracy(p) for p in rates]
    for lower, higher in zip(accuracies, accuracies[1:]):
        assert higher >= lower - 0.05
    assert accuracies[-1] > accuracies[0]


def test_same_seed_same_results():
    game = desk_game(trials=20)
    frames = [experiment_frame("poison_rate", game.p, run_experiment(game)) for _ in range(2)]
    pd.testing.assert_frame_equal(*(frame.drop(columns=["wall_time_s"]) for frame in frames))
