"""
Save and load trained models as JSON text.

Format (`poisonsnek-model/2`):

    {
      "format": "poisonsnek-model/2",
      "spec": {...ModelSpec fields...},
      "seed": 123,
      "scaler": {"center": [...], "half_range": [...]},
      "layers": [{"W": [[...], ...], "b": [...]}, ...]
    }

Floats are written with `repr` precision, so a reload predicts identically.
"""

import json
import logging
from typing import Any, Dict

import numpy as np

from .spec import ModelSpec
from .training import TrainedModel

logger = logging.getLogger(__name__)

MODEL_FORMAT = "poisonsnek-model/2"


class ModelFormatError(ValueError):
    """A saved model file is malformed or has an unknown format tag."""


def model_to_dict(model: TrainedModel) -> Dict[str, Any]:
    layers, center, half_range = model.parameters()
    return {
        "format": MODEL_FORMAT,
        "spec": model.spec.to_dict(),
        "seed": model.seed,
        "scaler": {"center": center.tolist(), "half_range": half_range.tolist()},
        "layers": [{"W": W.tolist(), "b": b.tolist()} for W, b in layers],
    }


def model_from_dict(data: Dict[str, Any]) -> TrainedModel:
    if data.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"unknown model format {data.get('format')!r}")
    try:
        spec = ModelSpec.from_dict(data["spec"])
        layers = [(np.array(layer["W"], dtype=float), np.array(layer["b"], dtype=float))
                  for layer in data["layers"]]
        center = np.array(data["scaler"]["center"], dtype=float)
        half_range = np.array(data["scaler"]["half_range"], dtype=float)
        seed = int(data["seed"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model record: {exc}") from exc

    widths = [center.shape[0], *spec.hidden, 1]
    if len(layers) != len(widths) - 1:
        raise ModelFormatError(f"expected {len(widths) - 1} layers, found {len(layers)}")
    for (W, b), fan_in, fan_out in zip(layers, widths[:-1], widths[1:]):
        if W.shape != (fan_in, fan_out) or b.shape != (fan_out,):
            raise ModelFormatError(f"layer shape {W.shape} does not match {(fan_in, fan_out)}")
    return TrainedModel(spec, layers, center, half_range, seed)


def save_model(model: TrainedModel, path: str) -> None:
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=2)
    logger.info(f"Saved model to {path}")


def load_model(path: str) -> TrainedModel:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path} is not valid JSON: {exc}") from exc
    model = model_from_dict(data)
    logger.debug(f"Loaded {model!r} from {path}")
    return model
