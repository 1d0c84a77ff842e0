"""
Data I/O Module - PoisonSnek 🐍🧪

Synthetic tasks, random-feature injection, CSV ingestion, the experiment
configuration and the command-line front end.
"""

from typing import Any, Dict

from .csv_io import CsvData, CsvDatasetDescriptor, SchemaError, load_csv, read_dataset, save_csv
from .experiment import ExperimentConfig, build_game
from .synthetic import (
    SyntheticSpec,
    SyntheticTask,
    calibrate_temperature,
    generate_synthetic,
    inject_random_feature,
    injected_feature_information,
)
from .cli import run_cli

MODULE_INFO = {
    "name": "📂 Data I/O",
    "description": "Synthetic tasks, CSV datasets and the CLI",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Calibrated synthetic tabular tasks",
        "Independent random property features",
        "CSV ingestion with holdout split",
        "JSON experiment configuration",
        "Command-line experiments",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "CsvData", "CsvDatasetDescriptor", "ExperimentConfig", "SchemaError", "SyntheticSpec",
    "SyntheticTask", "build_game", "calibrate_temperature", "generate_synthetic",
    "get_module_info", "inject_random_feature", "injected_feature_information", "load_csv",
    "read_dataset", "run_cli", "save_csv",
]
