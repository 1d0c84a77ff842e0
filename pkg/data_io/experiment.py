"""
Experiment configuration: a GameConfig plus its data source and output.

The dictionary form mirrors the sections of config.json
(system / data / model / game / attack), and from_dict(to_dict(c)) == c.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional

from game import ConfigError, GameConfig
from target_models import ModelSpec

from .csv_io import CsvDatasetDescriptor, load_csv
from .synthetic import SyntheticSpec, generate_synthetic

logger = logging.getLogger(__name__)

GAME_KEYS = ("n", "p", "t0", "t1", "trials", "repetitions", "uniform_bits", "seed", "test_size")
ATTACK_KEYS = ("r", "q", "k", "band", "budget_factor")


@dataclass(frozen=True)
class ExperimentConfig:
    synthetic: Optional[SyntheticSpec] = field(default_factory=SyntheticSpec)
    csv: Optional[CsvDatasetDescriptor] = None
    model: ModelSpec = field(default_factory=ModelSpec)
    n: int = 1000
    p: float = 0.1
    t0: float = 0.3
    t1: float = 0.7
    trials: int = 50
    repetitions: int = 1
    uniform_bits: bool = False
    seed: int = 0
    test_size: int = 1000
    r: int = 200
    q: int = 500
    k: int = 200
    band: float = 0.4
    budget_factor: int = 200
    threads: Optional[int] = None
    log_level: str = "INFO"
    out: Optional[str] = None

    def __post_init__(self):
        if (self.synthetic is None) == (self.csv is None):
            raise ConfigError("configure exactly one data source: synthetic or csv")

    def to_dict(self) -> Dict[str, Any]:
        if self.synthetic is not None:
            data = {"source": "synthetic", "synthetic": self.synthetic.to_dict()}
        else:
            data = {"source": "csv", "csv": self.csv.to_dict()}
        return {
            "system": {"log_level": self.log_level, "threads": self.threads, "out": self.out},
            "data": data,
            "model": self.model.to_dict(),
            "game": {key: getattr(self, key) for key in GAME_KEYS},
            "attack": {key: getattr(self, key) for key in ATTACK_KEYS},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        try:
            system = data.get("system", {})
            source = data.get("data", {"source": "synthetic"})
            kind = source.get("source", "synthetic")
            if kind == "synthetic":
                sources = {"synthetic": SyntheticSpec.from_dict(source.get("synthetic", {})),
                           "csv": None}
            elif kind == "csv":
                sources = {"synthetic": None, "csv": CsvDatasetDescriptor.from_dict(source["csv"])}
            else:
                raise ConfigError(f"unknown data source {kind!r}; use 'synthetic' or 'csv'")
            known = {f.name for f in fields(cls)}
            values: Dict[str, Any] = {}
            for section, keys in (("game", GAME_KEYS), ("attack", ATTACK_KEYS)):
                for key, value in data.get(section, {}).items():
                    if key not in keys or key not in known:
                        raise ConfigError(f"unknown config key {section}.{key}")
                    values[key] = value
            return cls(model=ModelSpec.from_dict(data.get("model", {})),
                       threads=system.get("threads"), log_level=system.get("log_level", "INFO"),
                       out=system.get("out"), **sources, **values)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed experiment config: {exc}") from exc

    def with_overrides(self, seed: Optional[int] = None, threads: Optional[int] = None,
                       out: Optional[str] = None) -> "ExperimentConfig":
        """Apply command-line overrides; None leaves a value unchanged."""
        changes: Dict[str, Any] = {}
        if seed is not None:
            changes["seed"] = seed
        if threads is not None:
            changes["threads"] = threads
        if out is not None:
            changes["out"] = out
        return replace(self, **changes) if changes else self


def build_game(cfg: ExperimentConfig) -> GameConfig:
    """Materialise the data source and return the game it configures."""
    common = dict(spec=cfg.model, n=cfg.n, p=cfg.p, t0=cfg.t0, t1=cfg.t1, r=cfg.r, q=cfg.q,
                  k=cfg.k, trials=cfg.trials, repetitions=cfg.repetitions,
                  uniform_bits=cfg.uniform_bits, seed=cfg.seed, workers=cfg.threads,
                  test_size=cfg.test_size, band=cfg.band, budget_factor=cfg.budget_factor)
    if cfg.synthetic is not None:
        task = generate_synthetic(cfg.synthetic)
        return GameConfig(task.positive, task.negative, task.f, **common)
    data = load_csv(cfg.csv)
    return GameConfig(data.positive, data.negative, data.f, attacker_positive=data.attacker_positive,
                      attacker_negative=data.attacker_negative, **common)
