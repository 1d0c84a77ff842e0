"""
Results CSV: one row per (sweep value, repetition).
"""

import logging
from typing import Any, Dict, List

import pandas as pd

from .trials import ExperimentResult
from .sweep import SweepResult

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["parameter", "value", "repetition", "trials", "wins", "accuracy", "ci_low",
                  "ci_high", "mean_precision", "mean_recall", "wall_time_s"]


def result_rows(parameter: str, value: Any, result: ExperimentResult) -> List[Dict[str, Any]]:
    return [{
        "parameter": parameter,
        "value": value,
        "repetition": rep.repetition,
        "trials": rep.trials,
        "wins": rep.wins,
        "accuracy": rep.accuracy,
        "ci_low": rep.ci_low,
        "ci_high": rep.ci_high,
        "mean_precision": rep.mean_precision,
        "mean_recall": rep.mean_recall,
        "wall_time_s": rep.wall_time_s,
    } for rep in result.repetitions]


def results_frame(sweep_result: SweepResult) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = []
    for value, result in zip(sweep_result.values, sweep_result.results):
        rows.extend(result_rows(sweep_result.parameter, value, result))
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def experiment_frame(parameter: str, value: Any, result: ExperimentResult) -> pd.DataFrame:
    return pd.DataFrame(result_rows(parameter, value, result), columns=RESULT_COLUMNS)


def write_results(frame: pd.DataFrame, path: str) -> None:
    frame.to_csv(path, index=False, float_format="%.10g")
    logger.info(f"Wrote {len(frame)} result rows to {path}")
