"""
Target Models Module - PoisonSnek 🐍🧪

Logistic regression and ReLU perceptrons trained by minibatch SGD, exposed
to the rest of the project through a label-only prediction interface.
"""

from typing import Any, Dict

from .parallel import default_workers, run_indexed
from .persistence import ModelFormatError, load_model, model_from_dict, model_to_dict, save_model
from .sgd import TrainingError
from .spec import ModelSpec
from .training import (
    BlackBox,
    DimensionMismatchError,
    LabelOnlyClassifier,
    QualityMetrics,
    TrainedModel,
    metrics,
    predict,
    train,
    train_ensemble,
)

MODULE_INFO = {
    "name": "🧠 Target Models",
    "description": "Logistic and MLP targets with label-only prediction",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Seeded minibatch SGD",
        "Hard-label black-box interface",
        "Accuracy, precision and recall",
        "Concurrent ensembles",
        "JSON model files",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "BlackBox", "DimensionMismatchError", "LabelOnlyClassifier", "ModelFormatError",
    "ModelSpec", "QualityMetrics", "TrainedModel", "TrainingError", "default_workers",
    "get_module_info", "load_model", "metrics", "model_from_dict", "model_to_dict", "predict",
    "run_indexed", "save_model", "train", "train_ensemble",
]
