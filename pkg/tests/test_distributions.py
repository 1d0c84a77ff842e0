import numpy as np
import pytest

from distributions import (
    Dataset,
    DistributionError,
    EmpiricalSource,
    EmptyConditionalError,
    EmptyDatasetError,
    FiniteDistribution,
    MixtureSpec,
    PropertyPredicate,
    SimplexError,
    adversary_distribution,
    condition,
    feature_predicate,
    flip_labels,
    mix,
    mix_finite,
    mixture_of_conditionals,
    poisoned,
    property_mixture,
    property_rate,
    sample,
    threshold_predicate,
)


class TestFiniteDistribution:
    def test_masses_must_sum_to_one(self):
        with pytest.raises(SimplexError):
            FiniteDistribution([[0.0], [1.0]], [0.5, 0.6], [0.1, 0.2])

    def test_negative_mass_rejected(self):
        with pytest.raises(SimplexError):
            FiniteDistribution([[0.0], [1.0]], [1.5, -0.5], [0.1, 0.2])

    def test_duplicate_points_rejected(self):
        with pytest.raises(DistributionError):
            FiniteDistribution([[0.0], [0.0]], [0.5, 0.5], [0.1, 0.2])

    def test_posterior_lookup(self, four_point):
        assert four_point.posterior([1.0, 1.0]) == pytest.approx(0.2)
        assert four_point.mass([1.0, 0.0]) == pytest.approx(0.4)
        with pytest.raises(KeyError):
            four_point.posterior([2.0, 2.0])

    def test_table_round_trip(self, four_point, tmp_path):
        path = tmp_path / "dist.csv"
        four_point.save_table(str(path))
        assert path.read_text().startswith("#")
        loaded = FiniteDistribution.load_table(str(path))
        np.testing.assert_array_equal(loaded.points, four_point.points)
        np.testing.assert_array_equal(loaded.masses, four_point.masses)
        np.testing.assert_array_equal(loaded.posteriors, four_point.posteriors)


class TestCondition:
    def test_sure_event_returns_same_distribution(self):
        dist = FiniteDistribution([[1.0, 0.0], [1.0, 1.0]], [0.5, 0.5], [0.3, 0.6])
        assert condition(dist, feature_predicate(0), 1) is dist

    def test_two_point_renormalises(self):
        dist = FiniteDistribution([[1.0], [0.0]], [0.3, 0.7], [0.4, 0.6])
        positive = condition(dist, feature_predicate(0), 1)
        assert len(positive) == 1
        assert positive.masses[0] == pytest.approx(1.0)

    def test_four_point_masses_proportional(self, four_point, prop):
        negative = condition(four_point, prop, 0)
        np.testing.assert_allclose(negative.masses, [3 / 7, 4 / 7])
        np.testing.assert_allclose(negative.posteriors, [0.5, 0.7])

    def test_zero_mass_event_raises(self):
        dist = FiniteDistribution([[1.0], [0.0]], [1.0, 0.0], [0.4, 0.6])
        with pytest.raises(EmptyConditionalError):
            condition(dist, feature_predicate(0), 0)


class TestMixtures:
    def test_degenerate_weights_return_first_component(self, four_point, prop):
        positive, negative = condition(four_point, prop, 1), condition(four_point, prop, 0)
        assert mix_finite([(positive, 1.0), (negative, 0.0)]) is positive

    def test_weights_off_simplex_rejected(self, four_point, prop):
        positive, negative = condition(four_point, prop, 1), condition(four_point, prop, 0)
        with pytest.raises(SimplexError):
            mix_finite([(positive, 0.7), (negative, 0.7)])

    def test_property_rate_of_mixture(self, four_point, prop):
        positive, negative = condition(four_point, prop, 1), condition(four_point, prop, 0)
        mixed = mixture_of_conditionals(positive, negative, 0.4)
        assert mixed.property_mass(prop) == pytest.approx(0.4)

    def test_disjoint_supports_scale_masses(self, four_point, prop):
        positive, negative = condition(four_point, prop, 1), condition(four_point, prop, 0)
        mixed = mixture_of_conditionals(positive, negative, 0.25)
        assert mixed.mass([0.0, 1.0]) == pytest.approx(0.25 * (1 / 3))
        assert mixed.mass([1.0, 1.0]) == pytest.approx(0.25 * (2 / 3))
        assert mixed.mass([0.0, 0.0]) == pytest.approx(0.75 * (3 / 7))
        assert mixed.mass([1.0, 0.0]) == pytest.approx(0.75 * (4 / 7))

    def test_mixture_source_exposes_exact_pmf(self, four_point, prop):
        positive = condition(four_point, prop, 1).to_source()
        negative = condition(four_point, prop, 0).to_source()
        source = mix(MixtureSpec.of((positive, 0.5), (negative, 0.5)))
        assert source.finite is not None
        assert source.finite.property_mass(prop) == pytest.approx(0.5)


    @pytest.mark.parametrize("seed", range(4))
    def test_mixing_conditionals_at_the_base_rate_restores_the_distribution(self, seed, prop):
        rng = np.random.default_rng(seed)
        points = [[float(a), float(b)] for a in range(3) for b in (0, 1)]
        dist = FiniteDistribution(points, rng.dirichlet(np.ones(6)), rng.uniform(0, 1, size=6))
        t = dist.property_mass(prop)
        restored = mixture_of_conditionals(condition(dist, prop, 1), condition(dist, prop, 0), t)
        for point in points:
            assert restored.mass(point) == pytest.approx(dist.mass(point), abs=1e-12)
            assert restored.posterior(point) == pytest.approx(dist.posterior(point), abs=1e-12)

    @pytest.mark.parametrize("t", [0.0, 0.13, 0.5, 0.9, 1.0])
    @pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.99])
    def test_mixing_conserves_mass(self, four_point, prop, t, p):
        positive, negative = condition(four_point, prop, 1), condition(four_point, prop, 0)
        mixed = mixture_of_conditionals(positive, negative, t)
        assert mixed.masses.sum() == pytest.approx(1.0)
        assert mixed.property_mass(prop) == pytest.approx(t)
        tilde = poisoned(mixed, p, adversary_distribution(positive, 1))
        assert tilde.masses.sum() == pytest.approx(1.0)
        assert tilde.property_mass(prop) == pytest.approx((1 - p) * t + p)
        source = mix(MixtureSpec.of((positive.to_source(), t), (negative.to_source(), 1 - t)))
        assert source.finite.masses.sum() == pytest.approx(1.0)


class TestPoisoning:
    def test_no_poison_keeps_clean(self, four_point, prop):
        adversarial = adversary_distribution(condition(four_point, prop, 1), 1)
        clean = poisoned(four_point, 0.0, adversarial)
        np.testing.assert_array_equal(clean.posteriors, four_point.posteriors)
        np.testing.assert_array_equal(clean.masses, four_point.masses)

    def test_full_poison_is_adversarial(self, four_point, prop):
        adversarial = adversary_distribution(condition(four_point, prop, 1), 1)
        assert poisoned(four_point, 1.0, adversarial) is adversarial

    def test_merged_posterior_on_two_point_domain(self):
        positive = FiniteDistribution([[1.0]], [1.0], [0.5])
        negative = FiniteDistribution([[0.0]], [1.0], [0.3])
        clean = mixture_of_conditionals(positive, negative, 0.5)
        tilde = poisoned(clean, 0.1, adversary_distribution(positive, 1))
        assert tilde.posterior([1.0]) == pytest.approx(13 / 22, abs=1e-12)
        assert tilde.posterior([0.0]) == pytest.approx(0.3, abs=1e-12)

    def test_poison_rate_outside_unit_interval(self, four_point):
        with pytest.raises(DistributionError):
            poisoned(four_point, 1.5, four_point)

    def test_adversary_distribution_forces_labels(self, four_point, prop):
        forced = adversary_distribution(condition(four_point, prop, 1), 1)
        assert np.all(forced.posteriors == 1.0)
        zero = adversary_distribution(condition(four_point, prop, 0), 0)
        assert np.all(zero.posteriors == 0.0)
        assert zero.property_mass(prop) == 0.0

    def test_flip_labels(self, four_point):
        np.testing.assert_allclose(flip_labels(four_point).posteriors, [0.1, 0.8, 0.5, 0.3])


class TestSampling:
    def test_zero_samples(self, four_point):
        data = sample(four_point.to_source(), 0, seed=1)
        assert len(data) == 0
        assert data.dim == 2

    def test_negative_size_rejected(self, four_point):
        with pytest.raises(DistributionError):
            sample(four_point.to_source(), -1, seed=1)

    def test_same_seed_same_dataset(self, four_point):
        source = four_point.to_source()
        assert sample(source, 50, seed=7) == sample(source, 50, seed=7)
        assert sample(source, 50, seed=7) != sample(source, 50, seed=8)

    def test_property_rate_matches_mixture(self, four_point, prop):
        positive = condition(four_point, prop, 1).to_source()
        negative = condition(four_point, prop, 0).to_source()
        data = sample(property_mixture(positive, negative, 0.3), 100000, seed=3)
        assert property_rate(data, prop) == pytest.approx(0.3, abs=0.01)

    def test_empirical_source_requires_rows(self):
        with pytest.raises(EmptyConditionalError):
            EmpiricalSource(Dataset(np.zeros((0, 2)), np.zeros(0)))


class TestDatasetAndPredicates:
    def test_property_rate_counts(self, prop):
        features = np.array([[0.0, 1.0]] * 3 + [[0.0, 0.0]] * 7)
        data = Dataset(features, np.zeros(10))
        assert property_rate(data, prop) == pytest.approx(0.3)
        assert property_rate(data.subset([0, 1, 2]), prop) == 1.0
        assert property_rate(data.subset([5, 6]), prop) == 0.0

    def test_property_rate_of_empty_dataset(self, prop):
        with pytest.raises(EmptyDatasetError):
            property_rate(Dataset(np.zeros((0, 2)), np.zeros(0)), prop)

    def test_labels_must_be_binary(self):
        with pytest.raises(DistributionError):
            Dataset([[0.0], [1.0]], [0, 2])

    def test_concat_rejects_mixed_dims(self):
        with pytest.raises(DistributionError):
            Dataset.concat(Dataset([[0.0]], [1]), Dataset([[0.0, 1.0]], [0]))

    def test_relabel(self):
        data = Dataset([[0.0], [1.0]], [0, 1]).relabel(1)
        assert data.labels.tolist() == [1, 1]

    def test_complement_and_derived_predicates(self):
        f = feature_predicate(0)
        assert f([1.0]) == 1 and f.complement()([1.0]) == 0
        older = threshold_predicate(0, 40)
        assert older([41.0]) == 1 and older([40.0]) == 0
        even = PropertyPredicate.from_callable(lambda x: int(x[0]) % 2 == 0, "even")
        assert even.evaluate_many(np.array([[2.0], [3.0]])).tolist() == [1, 0]
