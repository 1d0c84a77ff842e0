"""
Game configuration.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from distributions import DistributionSource, PropertyPredicate
from target_models import ModelSpec


class ConfigError(ValueError):
    """Invalid experiment or game configuration."""


SWEEP_PARAMETERS = {
    "poison_rate": "p",
    "shadow_count": "k",
    "train_size": "n",
    "ensemble_size": "r",
    "architecture": "spec",
}


@dataclass(frozen=True)
class GameConfig:
    """One game scenario plus the attack and repetition settings.

    Victim sources feed the challenger. Attacker sources (defaulting to the
    victim's) feed poison selection, the query ensemble and the shadow
    models, e.g. a held-out partition of a CSV dataset.
    """
    positive: DistributionSource
    negative: DistributionSource
    f: PropertyPredicate
    spec: ModelSpec = field(default_factory=ModelSpec)
    n: int = 1000
    p: float = 0.1
    t0: float = 0.3
    t1: float = 0.7
    r: int = 200
    q: int = 500
    k: int = 200
    trials: int = 50
    repetitions: int = 1
    uniform_bits: bool = False
    seed: int = 0
    workers: Optional[int] = None
    test_size: int = 1000
    band: float = 0.4
    budget_factor: int = 200
    attacker_positive: Optional[DistributionSource] = None
    attacker_negative: Optional[DistributionSource] = None

    def __post_init__(self):
        if not 0.0 <= self.t0 < self.t1 <= 1.0:
            raise ConfigError(f"need 0 <= t0 < t1 <= 1, got t0={self.t0}, t1={self.t1}")
        if not 0.0 <= self.p < 1.0:
            raise ConfigError(f"poison rate must lie in [0, 1), got {self.p}")
        if self.n < 1:
            raise ConfigError(f"training size must be >= 1, got {self.n}")
        for name in ("r", "q", "k", "trials", "repetitions"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.test_size < 0 or self.budget_factor < 1:
            raise ConfigError("test_size must be >= 0 and budget_factor >= 1")
        if not 0.0 <= self.band <= 1.0:
            raise ConfigError(f"certainty band must lie in [0, 1], got {self.band}")
        if self.positive.dim != self.negative.dim:
            raise ConfigError(f"conditionals have dims {self.positive.dim} and {self.negative.dim}")

    @property
    def poison_count(self) -> int:
        return int(round(self.p * self.n))

    @property
    def clean_size(self) -> int:
        return self.n - self.poison_count

    @property
    def dim(self) -> int:
        return self.positive.dim

    @property
    def adversary_positive(self) -> DistributionSource:
        return self.attacker_positive or self.positive

    @property
    def adversary_negative(self) -> DistributionSource:
        return self.attacker_negative or self.negative

    def with_parameter(self, parameter: str, value: Any) -> "GameConfig":
        """Copy with one sweepable parameter replaced."""
        if parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {parameter!r}; "
                              f"choose from {sorted(SWEEP_PARAMETERS)}")
        name = SWEEP_PARAMETERS[parameter]
        try:
            if parameter == "architecture":
                return replace(self, spec=self.spec.with_architecture(str(value)))
            if parameter == "poison_rate":
                return replace(self, p=float(value))
            number = float(value)
            if not math.isfinite(number) or number != int(number):
                raise ConfigError(f"{parameter} must be an integer, got {value!r}")
            return replace(self, **{name: int(number)})
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value {value!r} for {parameter}: {exc}") from exc
