"""Ant-colony clustering of labeled feature vectors on a toroidal grid, with
k-nearest-marker classification of the sorted layout."""

import json as _json

from ._core import (
    ConfigError,
    ContractViolation,
    DataError,
    DomainError,
    KernelParams,
    Simulation,
    crowding,
    direction_weight,
    drop_probability,
    evaluate,
    generate_synthetic,
    grid_side,
    knn_classify,
    normalized_distance,
    pheromone_weight,
    pick_probability,
    spatial_entropy,
    toroidal_distance,
    transition_distribution,
)
from ._core import run_synthetic_json as _run_synthetic_json

__version__ = "0.1.0"


def run_synthetic(**kwargs):
    """Runs the synthetic sorting experiment and returns the report as a dict."""
    return _json.loads(_run_synthetic_json(**kwargs))

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DataError",
    "DomainError",
    "KernelParams",
    "Simulation",
    "crowding",
    "direction_weight",
    "drop_probability",
    "evaluate",
    "generate_synthetic",
    "grid_side",
    "knn_classify",
    "normalized_distance",
    "pheromone_weight",
    "pick_probability",
    "run_synthetic",
    "spatial_entropy",
    "toroidal_distance",
    "transition_distribution",
]
