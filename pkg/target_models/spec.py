"""
Model specifications for the target-model family.

Architectures are written as strings in configs and sweeps:
`logistic` or `mlp:32-16-8-4-2` (hidden widths separated by dashes).
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class ModelSpec:
    """Architecture plus SGD hyperparameters."""
    architecture: str = "logistic"
    hidden: Tuple[int, ...] = field(default_factory=tuple)
    learning_rate: float = 0.1
    epochs: int = 50
    batch_size: int = 32
    l2: float = 1e-4

    def __post_init__(self):
        if self.architecture not in ("logistic", "mlp"):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if self.architecture == "logistic" and self.hidden:
            raise ValueError("a logistic model has no hidden layers")
        if self.architecture == "mlp" and not self.hidden:
            raise ValueError("an mlp needs at least one hidden layer")
        if any(h <= 0 for h in self.hidden):
            raise ValueError(f"hidden sizes must be positive, got {self.hidden}")
        if self.learning_rate <= 0 or self.epochs <= 0 or self.batch_size <= 0 or self.l2 < 0:
            raise ValueError("learning rate, epochs and batch size must be positive; l2 nonnegative")

    @property
    def label(self) -> str:
        if self.architecture == "logistic":
            return "logistic"
        return "mlp:" + "-".join(str(h) for h in self.hidden)

    @classmethod
    def from_string(cls, text: str, **hyper: Any) -> "ModelSpec":
        """Parse `logistic` or `mlp:32-16-8`."""
        text = text.strip().lower()
        if text == "logistic":
            return cls("logistic", (), **hyper)
        if text.startswith("mlp:"):
            widths = tuple(int(w) for w in text[4:].split("-") if w)
            return cls("mlp", widths, **hyper)
        raise ValueError(f"cannot parse architecture {text!r}; use 'logistic' or 'mlp:32-16-8'")

    def with_architecture(self, text: str) -> "ModelSpec":
        parsed = ModelSpec.from_string(text)
        return replace(self, architecture=parsed.architecture, hidden=parsed.hidden)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["hidden"] = list(self.hidden)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelSpec":
        data = dict(data)
        data["hidden"] = tuple(data.get("hidden", ()))
        return cls(**data)
