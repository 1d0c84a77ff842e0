import ast
from pathlib import Path

import numpy as np
import pytest

from attack import (
    ArtifactMismatchError,
    AttackModel,
    PoisonVariant,
    QueryBudgetExhausted,
    QuerySet,
    ShadowConfig,
    attack_l2,
    ensemble_certainty,
    filter_candidates,
    fit_attack_model,
    infer,
    load_attack_model,
    load_poison,
    load_queries,
    save_attack_model,
    save_poison,
    save_queries,
    select_poison,
    select_queries,
    split_sizes,
    train_attack_model,
    within_band,
)
from attack.queries import collect_queries
from distributions import FiniteDistribution, feature_predicate
from seeding import make_rng
from target_models import DimensionMismatchError

from fakes import FixedModel, constant_model

ROOT = Path(__file__).resolve().parent.parent

T1_PATTERN = np.array([0, 0, 0, 1, 1, 1])
T0_PATTERN = 1 - T1_PATTERN


def pattern_model(pattern):
    return FixedModel(lambda X: np.asarray(pattern)[: X.shape[0]])


@pytest.fixture
def six_queries():
    return QuerySet(np.arange(6, dtype=float).reshape(6, 1))


@pytest.fixture
def separable_attack(six_queries):
    k = 20
    responses = np.vstack([np.tile(T0_PATTERN, (k, 1)), np.tile(T1_PATTERN, (k, 1))])
    hypotheses = np.repeat([0, 1], k)
    return fit_attack_model(responses, hypotheses, k, six_queries.fingerprint, seed=3)


class TestPoisonSelection:
    def test_low_rates_poison_the_positive_side(self, small_task):
        poison = select_poison(small_task.f, 0.05, 0.15, 0.1, 100,
                               small_task.positive, small_task.negative, seed=1)
        assert poison.variant.conditional == "positive"
        assert len(poison) == 10
        assert np.all(small_task.f.evaluate_many(poison.features) == 1)
        assert np.all(poison.examples.labels == poison.label)

    def test_high_rates_poison_the_negative_side(self, small_task):
        poison = select_poison(small_task.f, 0.3, 0.7, 0.1, 100,
                               small_task.positive, small_task.negative, seed=1)
        assert poison.variant.property_value == 0
        assert np.all(small_task.f.evaluate_many(poison.features) == 0)

    def test_label_opposes_majority(self):
        f = feature_predicate(1)
        positive = FiniteDistribution([[0.0, 1.0], [1.0, 1.0]], [0.5, 0.5], [1.0, 1.0]).to_source()
        negative = FiniteDistribution([[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5], [0.0, 0.0]).to_source()
        poison = select_poison(f, 0.05, 0.15, 0.1, 100, positive, negative, seed=1)
        assert poison.variant is PoisonVariant.POSITIVE_LABEL_0
        assert poison.alpha == 1.0
        assert np.all(poison.examples.labels == 0)
        flipped = select_poison(f, 0.6, 0.9, 0.1, 100, positive, negative, seed=1)
        assert flipped.variant is PoisonVariant.NEGATIVE_LABEL_1

    def test_reversed_rates_rejected(self, small_task):
        with pytest.raises(ValueError):
            select_poison(small_task.f, 0.7, 0.3, 0.1, 100,
                          small_task.positive, small_task.negative, seed=1)

    def test_poison_budget_below_one_point(self, small_task):
        with pytest.raises(ValueError):
            select_poison(small_task.f, 0.3, 0.7, 0.001, 100,
                          small_task.positive, small_task.negative, seed=1)

    def test_deterministic(self, small_task):
        args = (small_task.f, 0.3, 0.7, 0.1, 100, small_task.positive, small_task.negative)
        assert select_poison(*args, seed=4).examples == select_poison(*args, seed=4).examples

    def test_split_sizes(self):
        assert split_sizes(1000, 0.1) == (900, 100)
        assert split_sizes(1000, 0.0) == (1000, 0)
        with pytest.raises(ValueError):
            split_sizes(1000, 1.0)


class TestQuerySelection:
    @pytest.mark.parametrize("votes, accepted", [(7, True), (3, True), (10, False), (2, False)])
    def test_band(self, votes, accepted):
        assert bool(within_band(np.array([votes]), 10, 0.4)[0]) is accepted

    def test_filter_keeps_uncertain_rows(self):
        models = [constant_model(1)] * 7 + [constant_model(0)] * 3
        candidates = np.arange(8, dtype=float).reshape(4, 2)
        kept = filter_candidates(models, candidates, 0.4)
        assert len(kept) == 4
        assert np.all(np.abs(ensemble_certainty(models, kept)) <= 0.4 + 1e-12)

    def test_filter_drops_unanimous_rows(self):
        split = FixedModel(lambda X: (X[:, 0] > 0).astype(int))
        models = [split] * 5 + [constant_model(1)] * 5
        kept = filter_candidates(models, np.array([[-1.0], [1.0], [-2.0]]), 0.4)
        assert kept.tolist() == [[-1.0], [-2.0]]

    def test_budget_exhaustion(self, small_task):
        models = [constant_model(1)] * 4
        with pytest.raises(QueryBudgetExhausted) as info:
            collect_queries(models, small_task.mixture(0.5), 5, make_rng(0), 0.4, budget_factor=2)
        assert info.value.accepted == 0
        assert info.value.drawn == 10

    def test_poison_rows_come_last(self, small_task, fast_spec):
        poison = select_poison(small_task.f, 0.3, 0.7, 0.1, 100,
                               small_task.positive, small_task.negative, seed=2)
        queries = select_queries(3, 10, small_task.positive, small_task.negative, fast_spec,
                                 seed=5, n=60, band=1.0, poison=poison, workers=1)
        assert len(queries) == 10 + len(poison)
        assert queries.poison_count == len(poison)
        np.testing.assert_array_equal(queries.points[10:], poison.features)
        assert len(queries.filtered) == 10

    def test_selection_is_deterministic(self, small_task, fast_spec):
        args = (3, 10, small_task.positive, small_task.negative, fast_spec)
        first = select_queries(*args, seed=5, n=60, band=1.0, workers=1)
        second = select_queries(*args, seed=5, n=60, band=1.0, workers=2)
        assert first.fingerprint == second.fingerprint

    def test_fingerprint_tracks_points(self):
        points = np.arange(6, dtype=float).reshape(3, 2)
        assert QuerySet(points).fingerprint == QuerySet(points.copy()).fingerprint
        moved = points.copy()
        moved[0, 0] += 1e-9
        assert QuerySet(moved).fingerprint != QuerySet(points).fingerprint
        assert QuerySet(points, 1).fingerprint != QuerySet(points).fingerprint


class TestAttackModel:
    def test_regularisation_weight(self):
        assert attack_l2(400) == pytest.approx(0.1)
        assert attack_l2(1) == pytest.approx(2.0)

    def test_shadow_config_validation(self, fast_spec):
        with pytest.raises(ValueError):
            ShadowConfig(k=0, clean_size=10, spec=fast_spec, seed=0)

    def test_separable_responses(self, separable_attack, six_queries):
        assert not separable_attack.degenerate
        assert separable_attack.training_accuracy == 1.0
        assert infer(separable_attack, pattern_model(T1_PATTERN), six_queries) == 1
        assert infer(separable_attack, pattern_model(T0_PATTERN), six_queries) == 0

    def test_constant_responses_are_degenerate(self, six_queries):
        responses = np.ones((8, 6))
        model = fit_attack_model(responses, np.repeat([0, 1], 4), 4, six_queries.fingerprint, 0)
        assert model.degenerate

    def test_wrong_query_set(self, separable_attack):
        other = QuerySet(np.arange(1, 7, dtype=float).reshape(6, 1))
        with pytest.raises(ArtifactMismatchError):
            infer(separable_attack, pattern_model(T1_PATTERN), other)

    def test_wrong_response_width(self, separable_attack):
        with pytest.raises(DimensionMismatchError):
            separable_attack.decide(np.ones((1, 5)))

    def test_zero_margin_decides_one(self):
        model = AttackModel(np.zeros(3), 0.0, 0.1, "fp")
        assert model.decide(np.array([1, 0, 1])).tolist() == [1]

    def test_end_to_end_training_is_deterministic(self, small_task, fast_spec):
        poison = select_poison(small_task.f, 0.3, 0.7, 0.1, 100,
                               small_task.positive, small_task.negative, seed=2)
        queries = select_queries(3, 10, small_task.positive, small_task.negative, fast_spec,
                                 seed=5, n=60, band=1.0, poison=poison, workers=1)
        cfg = ShadowConfig(k=3, clean_size=90, spec=fast_spec, seed=7)
        args = (cfg, poison, queries, 0.3, 0.7, small_task.positive, small_task.negative)
        first = train_attack_model(*args, workers=1)
        second = train_attack_model(*args, workers=2)
        assert first.dim == len(queries)
        assert first.query_fingerprint == queries.fingerprint
        np.testing.assert_array_equal(first.weights, second.weights)
        assert first.intercept == second.intercept


class TestArtifacts:
    def test_poison_file(self, small_task, tmp_path):
        poison = select_poison(small_task.f, 0.3, 0.7, 0.1, 100,
                               small_task.positive, small_task.negative, seed=2)
        path = tmp_path / "poison.csv"
        save_poison(poison, str(path))
        loaded = load_poison(str(path))
        assert loaded.examples == poison.examples
        assert loaded.variant is poison.variant

    def test_poison_file_with_mixed_labels(self, small_task, tmp_path):
        poison = select_poison(small_task.f, 0.3, 0.7, 0.1, 100,
                               small_task.positive, small_task.negative, seed=2)
        path = tmp_path / "poison.csv"
        save_poison(poison, str(path))
        text = path.read_text().splitlines()
        first = text[1].rsplit(",", 2)
        text[1] = ",".join([first[0], str(1 - poison.label), first[2]])
        path.write_text("\n".join(text) + "\n")
        with pytest.raises(ArtifactMismatchError):
            load_poison(str(path))

    def test_query_and_model_files(self, separable_attack, six_queries, tmp_path):
        queries_path = tmp_path / "queries.csv"
        model_path = tmp_path / "attack_model.json"
        save_queries(six_queries, str(queries_path))
        save_attack_model(separable_attack, str(model_path))
        queries = load_queries(str(queries_path))
        assert queries.fingerprint == six_queries.fingerprint
        model = load_attack_model(str(model_path), queries)
        np.testing.assert_array_equal(model.weights, separable_attack.weights)
        assert infer(model, pattern_model(T1_PATTERN), queries) == 1

    def test_model_against_other_queries(self, separable_attack, tmp_path):
        path = tmp_path / "attack_model.json"
        save_attack_model(separable_attack, str(path))
        with pytest.raises(ArtifactMismatchError):
            load_attack_model(str(path), QuerySet(np.zeros((6, 1))))


LABEL_ONLY_FORBIDDEN = {"_margin", "_layers", "_center", "_half_range", "parameters", "forward"}


@pytest.mark.parametrize("package", ["attack", "game"])
def test_adversary_code_uses_labels_only(package):
    """Adversary-side packages never reach into a target's internals."""
    for path in sorted((ROOT / package).glob("*.py")):
        tree = ast.parse(path.read_text(), filename=str(path))
        for node in ast.walk(tree):
            if isinstance(node, ast.Attribute):
                assert node.attr not in LABEL_ONLY_FORBIDDEN, f"{path.name}:{node.lineno}"
            if isinstance(node, ast.ImportFrom):
                names = {alias.name for alias in node.names}
                assert not names & LABEL_ONLY_FORBIDDEN, f"{path.name}:{node.lineno}"
