"""
Distributions Module - PoisonSnek 🐍🧪

Labeled-instance distributions, property predicates, conditional splits,
mixtures and the adversary's poisoned mixture, with exact (finite) and
sampling backends behind one source contract.
"""

from typing import Any, Dict

from .dataset import Dataset, DistributionError, EmptyDatasetError, LabeledExample, property_rate
from .finite import (
    PROB_TOL,
    EmptyConditionalError,
    FiniteDistribution,
    SimplexError,
    adversary_distribution,
    condition,
    flip_labels,
    mix_finite,
    mixture_of_conditionals,
    poisoned,
)
from .predicates import PropertyPredicate, feature_predicate, threshold_predicate
from .sources import (
    AppendedFeatureSource,
    DistributionSource,
    EmpiricalSource,
    FiniteSource,
    GenerativeSource,
    MixtureSource,
    MixtureSpec,
    mix,
    property_mixture,
    sample,
    sample_many,
)

MODULE_INFO = {
    "name": "🎲 Distributions",
    "description": "Exact and sampled labeled-instance distributions, mixtures and poisoning",
    "version": "1.0.0",
    "author": "PoisonSnek",
    "features": [
        "Finite pmfs with exact posteriors",
        "Property conditioning and mixtures",
        "Poisoned mixture construction",
        "Seeded sampling sources",
    ],
}


def get_module_info() -> Dict[str, Any]:
    """Return module information for the main loader."""
    return MODULE_INFO


__all__ = [
    "AppendedFeatureSource", "Dataset", "DistributionError", "DistributionSource",
    "EmpiricalSource", "EmptyConditionalError", "EmptyDatasetError", "FiniteDistribution",
    "FiniteSource", "GenerativeSource", "LabeledExample", "MixtureSource", "MixtureSpec",
    "PROB_TOL", "PropertyPredicate", "SimplexError", "adversary_distribution", "condition",
    "feature_predicate", "flip_labels", "get_module_info", "mix", "mix_finite",
    "mixture_of_conditionals", "poisoned", "property_mixture", "property_rate", "sample",
    "sample_many", "threshold_predicate",
]
