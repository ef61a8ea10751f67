"""Multi-objective reformulation of the group lasso on the bundled birth-weight data.

The regression fit term and the two group penalties are treated as three
separate objectives, each made strongly convex by an eps * ||x||^2
perturbation.  Front points are obtained by weighted-sum scalarization

    x*(w) = argmin_x  <w, f~(x)>,     w on the 2-simplex,

solved by steepest descent from x = 0; the recorded front sample pairs each
weight w with f~(x*(w)).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..errors import ConvergenceError, DatasetParseError
from ..fit import Sample, StratifiedSample
from ..simplex import (
    enumerate_subsimplices,
    sample_uniform_simplex,
    split_evenly,
)
from .descent import quadratic_descent_batch, steepest_descent

FEATURE_COLUMNS = ("age1", "age2", "age3", "lwt1", "lwt2", "lwt3")
RESPONSE_COLUMN = "bwt"
DEFAULT_EPS = 1e-4
N_OBJECTIVES = 3
MAX_RETRIES = 10


@dataclass(frozen=True)
class RegressionDataset:
    """Standardized design matrix, standardized response, and feature groups."""

    matrix: np.ndarray
    response: np.ndarray
    group_map: dict[str, str]
    feature_names: tuple[str, ...]

    @property
    def n_obs(self) -> int:
        return self.matrix.shape[0]

    def group_indices(self, group: str) -> list[int]:
        return [i for i, name in enumerate(self.feature_names)
                if self.group_map[name] == group]


def bundled_dataset_path():
    """Path of the birth-weight feature extract shipped with the package."""
    return resources.files("bezierfit").joinpath("data/birthwt_groups.csv")


def load_regression_dataset(path=None, expected_rows: int | None = None) -> RegressionDataset:
    """Load a grouped-feature CSV and standardize it.

    Expects header columns age1..age3, lwt1..lwt3, bwt.  Features are scaled
    to zero mean and unit variance, and the response is centered and scaled to
    unit variance as well, so every objective is O(1).  Parse failures carry
    the offending row and column.
    """
    if path is None:
        path = bundled_dataset_path()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DatasetParseError(f"{path}: file is empty")
        header = [h.strip() for h in header]
        missing = [c for c in (*FEATURE_COLUMNS, RESPONSE_COLUMN) if c not in header]
        if missing:
            raise DatasetParseError(f"{path}: missing columns {missing}", row=0)
        cols = {name: header.index(name) for name in (*FEATURE_COLUMNS, RESPONSE_COLUMN)}
        rows = []
        for row_number, row in enumerate(reader, start=1):
            parsed = []
            for name in (*FEATURE_COLUMNS, RESPONSE_COLUMN):
                cell = row[cols[name]]
                try:
                    parsed.append(float(cell))
                except ValueError as exc:
                    raise DatasetParseError(
                        f"{path}: non-numeric value {cell!r} at row {row_number}, "
                        f"column {name}",
                        row=row_number, column=name,
                    ) from exc
            rows.append(parsed)
    if not rows:
        raise DatasetParseError(f"{path}: no data rows")
    if expected_rows is not None and len(rows) != expected_rows:
        raise DatasetParseError(
            f"{path}: expected {expected_rows} rows, found {len(rows)}",
            row=len(rows),
        )
    data = np.asarray(rows)
    features = data[:, :len(FEATURE_COLUMNS)]
    response = data[:, len(FEATURE_COLUMNS)]
    std = features.std(axis=0)
    if np.any(std == 0):
        flat = [FEATURE_COLUMNS[i] for i in np.where(std == 0)[0]]
        raise DatasetParseError(f"{path}: constant feature columns {flat}")
    features = (features - features.mean(axis=0)) / std
    response = response - response.mean()
    response_std = response.std()
    if response_std == 0:
        raise DatasetParseError(f"{path}: response column is constant")
    response = response / response_std
    group_map = {name: ("age" if name.startswith("age") else "lwt")
                 for name in FEATURE_COLUMNS}
    return RegressionDataset(matrix=features, response=response,
                             group_map=group_map, feature_names=FEATURE_COLUMNS)


# ---------------------------------------------------------------------------
# Objectives


def _group_masks(dataset: RegressionDataset) -> np.ndarray:
    masks = np.zeros((2, len(dataset.feature_names)))
    masks[0, dataset.group_indices("age")] = 1.0
    masks[1, dataset.group_indices("lwt")] = 1.0
    return masks


def group_lasso_objectives(dataset: RegressionDataset, x: np.ndarray,
                           eps: float = DEFAULT_EPS) -> tuple[np.ndarray, np.ndarray]:
    """Perturbed objective vector f~ in R^3 and its analytic 3 x 6 gradient.

    f~_1 = ||Ax - y||^2 + eps ||x||^2,
    f~_2 = ||x_age||^2  + eps ||x||^2,
    f~_3 = ||x_lwt||^2  + eps ||x||^2.
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    x = np.asarray(x, dtype=float)
    a, y = dataset.matrix, dataset.response
    masks = _group_masks(dataset)
    residual = a @ x - y
    ridge = eps * float(x @ x)
    values = np.array([
        float(residual @ residual) + ridge,
        float(x @ (masks[0] * x)) + ridge,
        float(x @ (masks[1] * x)) + ridge,
    ])
    grads = np.vstack([
        2.0 * (a.T @ residual) + 2.0 * eps * x,
        2.0 * masks[0] * x + 2.0 * eps * x,
        2.0 * masks[1] * x + 2.0 * eps * x,
    ])
    return values, grads


def scalarized_quadratic(dataset: RegressionDataset, weights: np.ndarray,
                         eps: float = DEFAULT_EPS) -> tuple[np.ndarray, np.ndarray]:
    """Hessian and linear term of <w, f~>: gradient(x) = H x + c.

    Batched: ``weights`` of shape (n, 3) yields H of shape (n, 6, 6) and c of
    shape (n, 6).
    """
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    a, y = dataset.matrix, dataset.response
    gram = a.T @ a
    masks = _group_masks(dataset)
    dim = gram.shape[0]
    diag = w[:, 1, None] * masks[0] + w[:, 2, None] * masks[1] + eps
    hessians = 2.0 * (w[:, 0, None, None] * gram + diag[:, :, None] * np.eye(dim))
    linear = -2.0 * w[:, 0, None] * (a.T @ y)
    return hessians, linear


def solve_scalarization(dataset: RegressionDataset, weights: np.ndarray,
                        eps: float = DEFAULT_EPS, tol: float = 1e-8,
                        max_iter: int = 100_000) -> np.ndarray:
    """Minimize <w, f~> by steepest descent with exact steps from x = 0."""
    w = np.asarray(weights, dtype=float)
    hessians, linear = scalarized_quadratic(dataset, w[None, :], eps)
    h, c = hessians[0], linear[0]
    result = steepest_descent(
        grad=lambda x: h @ x + c,
        x0=np.zeros(len(c)),
        step_rule="exact",
        tol=tol,
        max_iter=max_iter,
    )
    return result.x


def _front_values(dataset: RegressionDataset, solutions: np.ndarray,
                  eps: float) -> np.ndarray:
    a, y = dataset.matrix, dataset.response
    masks = _group_masks(dataset)
    residual = solutions @ a.T - y
    ridge = eps * np.sum(solutions * solutions, axis=1)
    return np.column_stack([
        np.sum(residual * residual, axis=1) + ridge,
        np.sum(solutions * solutions * masks[0], axis=1) + ridge,
        np.sum(solutions * solutions * masks[1], axis=1) + ridge,
    ])


def _solve_weights(dataset: RegressionDataset, weights: np.ndarray, eps: float,
                   redraw, tol: float, max_iter: int) -> np.ndarray:
    """Batch-solve all weights, redrawing failed entries up to MAX_RETRIES."""
    weights = weights.copy()
    hessians, linear = scalarized_quadratic(dataset, weights, eps)
    solutions, ok = quadratic_descent_batch(hessians, linear, tol=tol, max_iter=max_iter)
    retries = 0
    while not ok.all():
        retries += 1
        if retries > MAX_RETRIES:
            raise ConvergenceError(
                f"scalarized solves failed for {int((~ok).sum())} weights "
                f"after {MAX_RETRIES} redraws"
            )
        bad = np.where(~ok)[0]
        weights[bad] = redraw(bad)
        hessians, linear = scalarized_quadratic(dataset, weights[bad], eps)
        fixed, fixed_ok = quadratic_descent_batch(hessians, linear, tol=tol,
                                                  max_iter=max_iter)
        solutions[bad] = fixed
        ok[bad] = fixed_ok
    return np.column_stack([weights, solutions])


def group_lasso_front_sample(dataset: RegressionDataset, n: int,
                             stratified: bool = False,
                             eps: float = DEFAULT_EPS,
                             rng: np.random.Generator | None = None,
                             per_level: dict[int, int] | None = None,
                             tol: float = 1e-8,
                             max_iter: int = 100_000) -> Sample | StratifiedSample:
    """Front observations (w, f~(x*(w))) for seeded weight draws.

    Unstratified mode draws w uniformly on the whole 2-simplex; stratified
    mode draws per skeleton level, splitting each level count equally over its
    subsimplices.  A weight whose solve does not converge is redrawn from the
    same region, at most MAX_RETRIES times.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if rng is None:
        rng = np.random.default_rng()

    if not stratified:
        weights = sample_uniform_simplex(N_OBJECTIVES, rng, size=n)

        def redraw(bad):
            return sample_uniform_simplex(N_OBJECTIVES, rng, size=len(bad))

        packed = _solve_weights(dataset, weights, eps, redraw, tol, max_iter)
        values = _front_values(dataset, packed[:, N_OBJECTIVES:], eps)
        return Sample(packed[:, :N_OBJECTIVES], values)

    if per_level is None:
        counts = split_evenly(n, N_OBJECTIVES)
        per_level = {m + 1: counts[m] for m in range(N_OBJECTIVES)}
    levels = {}
    for level in sorted(per_level):
        masks = np.asarray(enumerate_subsimplices(N_OBJECTIVES, level), dtype=float)
        shares = split_evenly(per_level[level], len(masks))
        mask_rows = np.repeat(np.arange(len(masks)), shares)

        def draw(rows):
            inner = sample_uniform_simplex(level, rng, size=len(rows))
            w = np.zeros((len(rows), N_OBJECTIVES))
            for i, mask_row in enumerate(rows):
                w[i, masks[mask_row] > 0] = inner[i]
            return w

        weights = draw(mask_rows)
        packed = _solve_weights(dataset, weights, eps,
                                redraw=lambda bad, rows=mask_rows: draw(rows[bad]),
                                tol=tol, max_iter=max_iter)
        values = _front_values(dataset, packed[:, N_OBJECTIVES:], eps)
        levels[level] = Sample(packed[:, :N_OBJECTIVES], values)
    return StratifiedSample(levels)
