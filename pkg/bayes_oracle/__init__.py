"""
Bayes Oracle Module - PoisonSnek 🐍🧪

Exact Bayes-optimal classifiers, risk, signed certainty, the poisoned
posterior closed form, certainty thresholds and band conditions, and the
theoretical label-only adversary that votes on band points.
"""

from typing import Any, Dict

from .adversary import RejectionBudgetExceeded, sample_band_points, theoretical_adversary
from .oracle import (
    BayesClassifier,
    RiskDecomposition,
    TableClassifier,
    UndefinedPredictionError,
    all_label_risks,
    bayes_error,
    bayes_optimal,
    certainty,
    risk,
    risk_decomposition_check,
)
from .theory import (
    DegenerateParameterError,
    TheoremParams,
    band_mass,
    band_mass_sufficient,
    band_mass_sufficient_noisy,
    band_prediction_rate,
    certainty_band,
    certainty_threshold,
    chernoff_query_count,
    poisoned_margin,
    poisoned_posterior,
)
from .verification import CheckResult, build_band_distribution, run_theory_suite, write_report

MODULE_INFO = {
    "name": "🔮 Bayes Oracle",
    "description": "Exact Bayes-optimal analysis of poisoned distributions",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Bayes-optimal classifier and error",
        "Poisoned posterior closed form",
        "Certainty band conditions",
        "Theoretical label-only adversary",
        "Theory verification report",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "BayesClassifier", "CheckResult", "DegenerateParameterError", "RejectionBudgetExceeded",
    "RiskDecomposition", "TableClassifier", "TheoremParams", "UndefinedPredictionError",
    "all_label_risks", "band_mass", "band_mass_sufficient", "band_mass_sufficient_noisy",
    "band_prediction_rate", "bayes_error", "bayes_optimal", "build_band_distribution", "certainty",
    "certainty_band", "certainty_threshold", "chernoff_query_count", "get_module_info",
    "poisoned_margin", "poisoned_posterior", "risk", "risk_decomposition_check",
    "run_theory_suite", "sample_band_points", "theoretical_adversary", "write_report",
]
