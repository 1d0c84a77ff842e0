"""
Parameter sweeps over the game.

Every value runs with the same master seed, so two values differ only in
the swept parameter.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Tuple

from .config import SWEEP_PARAMETERS, ConfigError, GameConfig
from .trials import Adversary, ExperimentResult, run_experiment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    values: Tuple[Any, ...]
    results: Tuple[ExperimentResult, ...]

    def accuracy(self, value: Any) -> float:
        return self.results[self.values.index(value)].accuracy

    def accuracies(self) -> Tuple[float, ...]:
        return tuple(r.accuracy for r in self.results)


def sweep(base: GameConfig, parameter: str, values: Sequence[Any],
          adversary: Optional[Adversary] = None, progress: bool = False,
          on_result: Optional[Callable[[Any, ExperimentResult], None]] = None) -> SweepResult:
    """run_experiment once per value of `parameter`."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; "
                          f"choose from {sorted(SWEEP_PARAMETERS)}")
    if not values:
        raise ConfigError("a sweep needs at least one value")
    configs = [base.with_parameter(parameter, value) for value in values]

    results = []
    for value, cfg in zip(values, configs):
        logger.info(f"Sweep {parameter}={value}")
        result = run_experiment(cfg, adversary=adversary, progress=progress)
        results.append(result)
        if on_result is not None:
            on_result(value, result)
    return SweepResult(parameter, tuple(values), tuple(results))
