"""
The poisoned property-inference game.

Per repetition the adversary builds its artifacts (poison, queries, attack
model) from its own sources only. Then, per trial, the challenger picks a
hidden bit b, trains a target on (1 - p) * n clean points from D_{t_b}
plus the poison, and the adversary guesses b through label-only queries.

Seeds: artifacts use derive_seed(master, repetition, ARTIFACT_STREAM),
hidden bits derive_seed(master, repetition, BIT_STREAM) and trial i
derive_seed(master, repetition, i), so any trial can be replayed alone.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.stats import binomtest

from bayes_oracle import TheoremParams, bayes_optimal, theoretical_adversary
from distributions import (
    Dataset,
    FiniteDistribution,
    PropertyPredicate,
    adversary_distribution,
    mixture_of_conditionals,
    poisoned,
    property_mixture,
    sample,
)
from seeding import derive_seed, make_rng
from target_models import BlackBox, QualityMetrics, TrainingError, metrics, run_indexed, train

from attack import (
    AttackModel,
    PoisonSet,
    QuerySet,
    ShadowConfig,
    infer,
    select_poison,
    select_queries,
    train_attack_model,
)

from .config import GameConfig

logger = logging.getLogger(__name__)

ARTIFACT_STREAM = 0x7FFFFFFF
BIT_STREAM = 0x7FFFFFFE


def artifact_seed(master: int, repetition: int = 0) -> int:
    """Seed of the poison, queries and attack model for one repetition."""
    return derive_seed(master, repetition, ARTIFACT_STREAM)

Adversary = Callable[[BlackBox], int]


class AllTrialsInvalidError(RuntimeError):
    """Every trial of an experiment failed to train its target."""


@dataclass(frozen=True)
class AttackArtifacts:
    poison: PoisonSet
    queries: Optional[QuerySet] = None
    attack_model: Optional[AttackModel] = None


@dataclass(frozen=True)
class TrialRecord:
    """One game: hidden bit, guess and the target's quality on clean test data."""
    repetition: int
    index: int
    bit: int
    guess: Optional[int]
    seconds: float
    metrics: Optional[QualityMetrics] = None
    error: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.error is None

    @property
    def win(self) -> bool:
        return self.valid and self.bit == self.guess


@dataclass(frozen=True)
class RepetitionSummary:
    repetition: int
    trials: int
    wins: int
    invalid: int
    accuracy: float
    ci_low: float
    ci_high: float
    mean_precision: float
    mean_recall: float
    mean_model_accuracy: float
    wall_time_s: float


@dataclass(frozen=True)
class ExperimentResult:
    """Attack accuracy with an exact 95% binomial interval, plus per-repetition rows."""
    trials: int
    wins: int
    invalid: int
    accuracy: float
    ci_low: float
    ci_high: float
    mean_precision: float
    mean_recall: float
    mean_model_accuracy: float
    wall_time_s: float
    repetitions: Tuple[RepetitionSummary, ...] = ()
    records: Tuple[TrialRecord, ...] = field(default=(), repr=False)


def binomial_interval(wins: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Exact (Clopper-Pearson) interval for the win rate."""
    ci = binomtest(wins, trials).proportion_ci(confidence_level=confidence, method="exact")
    return float(ci.low), float(ci.high)


def hidden_bits(count: int, seed: int, uniform: bool = False) -> np.ndarray:
    """Balanced alternation 0, 1, 0, 1, ... or i.i.d. fair coins."""
    if uniform:
        return make_rng(seed).integers(0, 2, size=count)
    return np.arange(count) % 2


def build_poison(cfg: GameConfig, seed: int) -> PoisonSet:
    if cfg.poison_count == 0:
        return PoisonSet.empty(cfg.dim)
    return select_poison(cfg.f, cfg.t0, cfg.t1, cfg.p, cfg.n, cfg.adversary_positive,
                         cfg.adversary_negative, derive_seed(seed, 0))


def build_attack(cfg: GameConfig, seed: int, progress: bool = False) -> AttackArtifacts:
    """Poison, queries and attack model from the adversary's sources alone."""
    positive, negative = cfg.adversary_positive, cfg.adversary_negative
    poison = build_poison(cfg, seed)
    queries = select_queries(cfg.r, cfg.q, positive, negative, cfg.spec, derive_seed(seed, 1),
                             n=cfg.n, band=cfg.band, budget_factor=cfg.budget_factor,
                             poison=poison, workers=cfg.workers, progress=progress)
    shadow = ShadowConfig(cfg.k, cfg.clean_size, cfg.spec, derive_seed(seed, 2))
    attack_model = train_attack_model(shadow, poison, queries, cfg.t0, cfg.t1, positive,
                                      negative, workers=cfg.workers, progress=progress)
    return AttackArtifacts(poison, queries, attack_model)


def _victim_data(cfg: GameConfig, bit: int, seed: int) -> Tuple[Dataset, Dataset]:
    t = cfg.t1 if bit else cfg.t0
    source = property_mixture(cfg.positive, cfg.negative, t)
    clean = sample(source, cfg.clean_size, derive_seed(seed, 1))
    test = sample(source, cfg.test_size, derive_seed(seed, 3))
    return clean, test


def run_trial(cfg: GameConfig, poison: PoisonSet, queries: Optional[QuerySet],
              attack_model: Optional[AttackModel], seed: int, bit: Optional[int] = None,
              adversary: Optional[Adversary] = None, repetition: int = 0,
              index: int = 0) -> TrialRecord:
    """Play one game; a target that fails to train yields an invalid record."""
    started = time.perf_counter()
    if bit is None:
        bit = int(make_rng(derive_seed(seed, 0)).integers(0, 2))
    clean, test = _victim_data(cfg, bit, seed)
    training = Dataset.concat(clean, poison.examples) if len(poison) else clean
    try:
        target = train(cfg.spec, training, derive_seed(seed, 2))
    except TrainingError as exc:
        logger.warning(f"Trial {repetition}/{index} invalid: {exc}")
        return TrialRecord(repetition, index, bit, None, time.perf_counter() - started,
                           error=str(exc))

    box = BlackBox(target)
    if adversary is not None:
        guess = int(adversary(box))
    else:
        if queries is None or attack_model is None:
            raise ValueError("run_trial needs queries and an attack model when no adversary is given")
        guess = infer(attack_model, box, queries)
    quality = metrics(target, test) if len(test) else None
    return TrialRecord(repetition, index, bit, guess, time.perf_counter() - started, quality)


def _mean(values: List[float]) -> float:
    return float(np.mean(values)) if values else float("nan")


def summarize(records: List[TrialRecord], repetition: int, seconds: float) -> RepetitionSummary:
    valid = [r for r in records if r.valid]
    wins = sum(r.win for r in valid)
    if valid:
        low, high = binomial_interval(wins, len(valid))
        accuracy = wins / len(valid)
    else:
        low = high = accuracy = float("nan")
    quality = [r.metrics for r in valid if r.metrics is not None]
    return RepetitionSummary(
        repetition=repetition, trials=len(valid), wins=wins, invalid=len(records) - len(valid),
        accuracy=accuracy, ci_low=low, ci_high=high,
        mean_precision=_mean([m.precision for m in quality]),
        mean_recall=_mean([m.recall for m in quality]),
        mean_model_accuracy=_mean([m.accuracy for m in quality]),
        wall_time_s=seconds,
    )


def aggregate(records: List[TrialRecord], summaries: List[RepetitionSummary],
              seconds: float) -> ExperimentResult:
    overall = summarize(records, -1, seconds)
    if overall.trials == 0:
        raise AllTrialsInvalidError(f"all {len(records)} trials failed to train a target")
    if overall.invalid:
        logger.warning(f"{overall.invalid} of {len(records)} trials were invalid and excluded")
    return ExperimentResult(
        trials=overall.trials, wins=overall.wins, invalid=overall.invalid,
        accuracy=overall.accuracy, ci_low=overall.ci_low, ci_high=overall.ci_high,
        mean_precision=overall.mean_precision, mean_recall=overall.mean_recall,
        mean_model_accuracy=overall.mean_model_accuracy, wall_time_s=seconds,
        repetitions=tuple(summaries), records=tuple(records),
    )


def run_experiment(cfg: GameConfig, adversary: Optional[Adversary] = None,
                   progress: bool = False) -> ExperimentResult:
    """Run `repetitions` blocks of `trials` games and report the win rate.

    With `adversary` given, only the poison is built and the adversary
    replaces the attack model.
    """
    started = time.perf_counter()
    records: List[TrialRecord] = []
    summaries: List[RepetitionSummary] = []
    for rep in range(cfg.repetitions):
        rep_started = time.perf_counter()
        seed = artifact_seed(cfg.seed, rep)
        if adversary is None:
            artifacts = build_attack(cfg, seed, progress)
        else:
            artifacts = AttackArtifacts(build_poison(cfg, seed))
        bits = hidden_bits(cfg.trials, derive_seed(cfg.seed, rep, BIT_STREAM), cfg.uniform_bits)

        def trial(i: int) -> TrialRecord:
            return run_trial(cfg, artifacts.poison, artifacts.queries, artifacts.attack_model,
                             derive_seed(cfg.seed, rep, i), bit=int(bits[i]),
                             adversary=adversary, repetition=rep, index=i)

        block = run_indexed(trial, cfg.trials, cfg.workers, desc=f"trials[{rep}]",
                            progress=progress)
        records.extend(block)
        summaries.append(summarize(block, rep, time.perf_counter() - rep_started))

    result = aggregate(records, summaries, time.perf_counter() - started)
    logger.info(f"Experiment finished: accuracy {result.accuracy:.3f} "
                f"[{result.ci_low:.3f}, {result.ci_high:.3f}] over {result.trials} trials")
    return result


@dataclass(frozen=True)
class OracleGameConfig:
    """The game with an exact Bayes learner and the band-voting adversary."""
    positive: FiniteDistribution
    negative: FiniteDistribution
    f: PropertyPredicate
    params: TheoremParams
    trials: int = 100
    seed: int = 0
    uniform_bits: bool = False
    workers: Optional[int] = None


def run_oracle_trial(cfg: OracleGameConfig, seed: int, bit: Optional[int] = None,
                     index: int = 0) -> TrialRecord:
    """Learner = Bayes classifier of the poisoned D_{t_b}; adversary votes on band points."""
    started = time.perf_counter()
    params = cfg.params
    if bit is None:
        bit = int(make_rng(derive_seed(seed, 0)).integers(0, 2))
    clean = mixture_of_conditionals(cfg.positive, cfg.negative, params.t1 if bit else params.t0)
    target = bayes_optimal(poisoned(clean, params.p, adversary_distribution(cfg.positive, 1)))
    guess = theoretical_adversary(BlackBox(target), cfg.positive.to_source("X+"), cfg.f,
                                  params, derive_seed(seed, 1))
    return TrialRecord(0, index, bit, guess, time.perf_counter() - started)


def run_oracle_experiment(cfg: OracleGameConfig) -> ExperimentResult:
    started = time.perf_counter()
    bits = hidden_bits(cfg.trials, derive_seed(cfg.seed, 0, BIT_STREAM), cfg.uniform_bits)
    records = run_indexed(
        lambda i: run_oracle_trial(cfg, derive_seed(cfg.seed, 0, i), int(bits[i]), i),
        cfg.trials, cfg.workers, desc="oracle trials")
    seconds = time.perf_counter() - started
    result = aggregate(records, [summarize(records, 0, seconds)], seconds)
    logger.info(f"Oracle game: {result.wins}/{result.trials} wins")
    return result
