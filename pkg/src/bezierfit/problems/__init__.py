"""Benchmark problem generators: synthetic targets, the location problem,
and the group-lasso reformulation."""

from .descent import DescentResult, quadratic_descent_batch, steepest_descent
from .group_lasso import (
    RegressionDataset,
    bundled_dataset_path,
    group_lasso_front_sample,
    group_lasso_objectives,
    load_regression_dataset,
    scalarized_quadratic,
    solve_scalarization,
)
from .med import med_front_point, med_front_points, med_sample
from .synthetic import SyntheticSpec, synthetic_training_set, unit_simplex_model

__all__ = [
    "DescentResult",
    "RegressionDataset",
    "SyntheticSpec",
    "bundled_dataset_path",
    "group_lasso_front_sample",
    "group_lasso_objectives",
    "load_regression_dataset",
    "med_front_point",
    "med_front_points",
    "med_sample",
    "quadratic_descent_batch",
    "scalarized_quadratic",
    "solve_scalarization",
    "steepest_descent",
    "synthetic_training_set",
    "unit_simplex_model",
]
