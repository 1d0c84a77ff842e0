"""
Attack Module - PoisonSnek 🐍🧪

The concrete label-only attack: choose a poison set, pick uncertain query
points with an ensemble, learn how shadow targets answer under t0 and t1,
and read the hidden fraction off a target's answers.
"""

from typing import Any, Dict

from .artifacts import (
    load_attack_model,
    load_poison,
    load_queries,
    save_attack_model,
    save_poison,
    save_queries,
)
from .poison import PoisonSet, PoisonVariant, select_poison, split_sizes
from .queries import (
    QueryBudgetExhausted,
    QuerySet,
    ensemble_certainty,
    ensemble_votes,
    filter_candidates,
    select_queries,
    within_band,
)
from .shadow import (
    ArtifactMismatchError,
    AttackModel,
    ShadowConfig,
    attack_l2,
    fit_attack_model,
    infer,
    response_matrix,
    train_attack_model,
)

MODULE_INFO = {
    "name": "🗡️ Attack",
    "description": "Poisoning-assisted label-only property inference",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Four-variant poison selection",
        "Ensemble certainty query filter",
        "Shadow models and linear attack model",
        "Fingerprinted artifact files",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "ArtifactMismatchError", "AttackModel", "PoisonSet", "PoisonVariant", "QueryBudgetExhausted",
    "QuerySet", "ShadowConfig", "attack_l2", "ensemble_certainty", "ensemble_votes",
    "filter_candidates", "fit_attack_model", "get_module_info", "infer", "load_attack_model",
    "load_poison", "load_queries", "response_matrix", "save_attack_model", "save_poison",
    "save_queries", "select_poison", "select_queries", "split_sizes", "train_attack_model",
    "within_band",
]
