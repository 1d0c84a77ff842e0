"""
Game Module - PoisonSnek 🐍🧪

Challenger/adversary harness for the poisoned property-inference game,
repeated trials with exact binomial intervals, the exact-oracle variant
and parameter sweeps written as CSV.
"""

from typing import Any, Dict

from .config import SWEEP_PARAMETERS, ConfigError, GameConfig
from .trials import (
    AllTrialsInvalidError,
    AttackArtifacts,
    ExperimentResult,
    OracleGameConfig,
    RepetitionSummary,
    TrialRecord,
    artifact_seed,
    binomial_interval,
    build_attack,
    build_poison,
    hidden_bits,
    run_experiment,
    run_oracle_experiment,
    run_oracle_trial,
    run_trial,
)
from .results import RESULT_COLUMNS, experiment_frame, results_frame, write_results
from .sweep import SweepResult, sweep

MODULE_INFO = {
    "name": "🎯 Game",
    "description": "Poisoned property-inference game and sweeps",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Oblivious attack construction",
        "Balanced or uniform hidden bits",
        "Exact binomial confidence intervals",
        "Exact Bayes-learner oracle game",
        "Sweeps over poison rate, shadows, size, ensemble, architecture",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "AllTrialsInvalidError", "AttackArtifacts", "ConfigError", "ExperimentResult",
    "GameConfig", "OracleGameConfig", "RESULT_COLUMNS", "RepetitionSummary", "SWEEP_PARAMETERS",
    "SweepResult", "TrialRecord", "artifact_seed", "binomial_interval", "build_attack", "build_poison",
    "experiment_frame", "get_module_info", "hidden_bits", "results_frame", "run_experiment",
    "run_oracle_experiment", "run_oracle_trial", "run_trial", "sweep", "write_results",
]
