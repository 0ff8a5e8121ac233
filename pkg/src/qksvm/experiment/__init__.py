"""Experiment pipeline, report emission and the ``qksvm`` command line."""

from .reports import emit_reports
from .runner import (
    DEFAULT_MODELS,
    ExperimentConfig,
    grid_search,
    mean_rows,
    run_experiment,
    select_hyperparameters,
    stratified_folds,
)

__all__ = [
    "DEFAULT_MODELS",
    "ExperimentConfig",
    "emit_reports",
    "grid_search",
    "mean_rows",
    "run_experiment",
    "select_hyperparameters",
    "stratified_folds",
]
