"""Ordinary-least-squares fitters: all-at-once and inductive skeleton.

Both fitters solve normal equations through a Cholesky factorization guarded
by a condition estimate; near-singular designs raise
:class:`~bezierfit.errors.SingularDesignError` instead of returning garbage.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, get_lapack_funcs

from .bezier import BezierSimplex, design_matrix, partition_by_level
from .errors import InsufficientStrataError, SingularDesignError
from .simplex import enumerate_lattice, lattice_size, nonzero_count

CONDITION_LIMIT = 1e12
ORTHOGONALITY_TOL = 1e-8


@dataclass
class Sample:
    """Paired (t, x) observations: parameters (n, M) and values (n, L)."""

    parameters: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.parameters = np.atleast_2d(np.asarray(self.parameters, dtype=float))
        self.values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if self.parameters.shape[0] != self.values.shape[0]:
            raise ValueError(
                f"parameters and values disagree on sample count: "
                f"{self.parameters.shape[0]} vs {self.values.shape[0]}"
            )

    def __len__(self) -> int:
        return self.parameters.shape[0]

    @property
    def dims(self) -> int:
        return self.parameters.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.values.shape[1]


@dataclass
class StratifiedSample:
    """Per-skeleton-level samples; key m holds points on the (m-1)-skeleton."""

    levels: dict[int, Sample]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("stratified sample must contain at least one level")
        dims = {s.dims for s in self.levels.values()}
        amb = {s.ambient_dim for s in self.levels.values()}
        if len(dims) != 1 or len(amb) != 1:
            raise ValueError("all levels must share parameter and value dimensions")
        for level, sample in self.levels.items():
            if not 1 <= level <= sample.dims:
                raise ValueError(f"level {level} outside 1..{sample.dims}")
            support = np.count_nonzero(sample.parameters, axis=1)
            if len(sample) and support.max() > level:
                raise ValueError(
                    f"level {level} contains a point with {support.max()} non-zero "
                    f"coordinates"
                )

    @property
    def dims(self) -> int:
        return next(iter(self.levels.values())).dims

    @property
    def ambient_dim(self) -> int:
        return next(iter(self.levels.values())).ambient_dim

    @property
    def total(self) -> int:
        return sum(len(s) for s in self.levels.values())


def solve_normal_equations(gram: np.ndarray, rhs: np.ndarray,
                           context: str = "design") -> np.ndarray:
    """Solve G P = B for symmetric positive-definite G via Cholesky.

    Raises SingularDesignError when G fails to factor or its 1-norm condition
    estimate exceeds CONDITION_LIMIT.
    """
    gram = np.asarray(gram, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    try:
        factor = cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularDesignError(f"{context}: normal equations not positive definite") from exc
    pocon = get_lapack_funcs("pocon", (gram,))
    anorm = np.linalg.norm(gram, 1)
    rcond, info = pocon(factor[0], anorm)
    if info != 0 or not np.isfinite(rcond) or rcond < 1.0 / CONDITION_LIMIT:
        est = (1.0 / rcond) if rcond > 0 else np.inf
        raise SingularDesignError(
            f"{context}: condition estimate {est:.3e} exceeds {CONDITION_LIMIT:.0e}"
        )
    return cho_solve(factor, rhs, check_finite=False)


def _check_orthogonality(design: np.ndarray, residual: np.ndarray,
                         rhs: np.ndarray, context: str) -> None:
    gap = np.abs(design.T @ residual).max()
    scale = max(1.0, np.abs(rhs).max())
    if gap > ORTHOGONALITY_TOL * scale:
        raise SingularDesignError(
            f"{context}: residual not orthogonal to the design "
            f"(|Z'r| = {gap:.3e} > {ORTHOGONALITY_TOL:.0e} * {scale:.3e})"
        )


def fit_all_at_once(sample: Sample, degree: int) -> BezierSimplex:
    """Single OLS solve for all control points from an unstratified sample."""
    n_basis = lattice_size(sample.dims, degree)
    if len(sample) < n_basis:
        raise SingularDesignError(
            f"underdetermined: {len(sample)} samples for {n_basis} control points"
        )
    design = design_matrix(sample.parameters, degree)
    gram = design.T @ design
    rhs = design.T @ sample.values
    points = solve_normal_equations(gram, rhs, context="all-at-once design")
    _check_orthogonality(design, sample.values - design @ points, rhs,
                         context="all-at-once design")
    return BezierSimplex(dims=sample.dims, degree=degree,
                         ambient_dim=sample.ambient_dim, control_points=points)


def fit_inductive_skeleton(sample: StratifiedSample, degree: int) -> BezierSimplex:
    """Level-by-level OLS, fixing lower-skeleton control points first.

    Stage m fits the control points whose multi-index has exactly m non-zero
    entries, using the level-m sample.  Basis functions of higher levels
    vanish on the level-m skeleton, and lower-level control points are
    already fixed, so each stage is a small decoupled OLS problem after
    subtracting the fixed lower-level contribution.
    """
    dims = sample.dims
    lattice = enumerate_lattice(dims, degree)
    groups = partition_by_level(lattice)
    fit_levels = [m for m in sorted(groups) if m >= 1]
    if not fit_levels:
        raise ValueError(f"degree {degree} admits no skeleton levels to fit")

    control = np.zeros((len(lattice), next(iter(sample.levels.values())).ambient_dim))
    for m in fit_levels:
        if m not in sample.levels or len(sample.levels[m]) == 0:
            raise InsufficientStrataError(
                f"level {m} sample required to fit its {len(groups[m])} control points"
            )
        stage = sample.levels[m]
        full_design = design_matrix(stage.parameters, degree)
        own = full_design[:, groups[m]]
        target = stage.values.copy()
        for k in fit_levels:
            if k >= m:
                break
            target -= full_design[:, groups[k]] @ control[groups[k]]
        gram = own.T @ own
        rhs = own.T @ target
        solved = solve_normal_equations(gram, rhs, context=f"skeleton level {m}")
        _check_orthogonality(own, target - own @ solved, rhs,
                             context=f"skeleton level {m}")
        control[groups[m]] = solved
    return BezierSimplex(dims=dims, degree=degree,
                         ambient_dim=sample.ambient_dim, control_points=control)


# ---------------------------------------------------------------------------
# CSV interchange: columns t_1..t_M, x_1..x_L, level (0 = unstratified)


def write_sample_csv(path, data: Sample | StratifiedSample) -> None:
    if isinstance(data, Sample):
        rows = [(data.parameters[i], data.values[i], 0) for i in range(len(data))]
        dims, amb = data.dims, data.ambient_dim
    else:
        rows = []
        dims, amb = data.dims, data.ambient_dim
        for level in sorted(data.levels):
            s = data.levels[level]
            rows.extend((s.parameters[i], s.values[i], level) for i in range(len(s)))
    header = [f"t_{i + 1}" for i in range(dims)] + [f"x_{j + 1}" for j in range(amb)] + ["level"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, x, level in rows:
            writer.writerow([repr(v) for v in t] + [repr(v) for v in x] + [level])


def read_sample_csv(path) -> Sample | StratifiedSample:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty sample file")
        t_cols = [i for i, name in enumerate(header) if name.startswith("t_")]
        x_cols = [i for i, name in enumerate(header) if name.startswith("x_")]
        if not t_cols or not x_cols or "level" not in header:
            raise ValueError(f"{path}: expected t_*, x_* and level columns, got {header}")
        level_col = header.index("level")
        params, values, levels = [], [], []
        for row in reader:
            params.append([float(row[i]) for i in t_cols])
            values.append([float(row[i]) for i in x_cols])
            levels.append(int(row[level_col]))
    params = np.asarray(params)
    values = np.asarray(values)
    levels = np.asarray(levels)
    if params.size == 0:
        raise ValueError(f"{path}: sample file has no data rows")
    if np.all(levels == 0):
        return Sample(parameters=params, values=values)
    if np.any(levels == 0):
        raise ValueError(f"{path}: mixed stratified and unstratified rows")
    return StratifiedSample(levels={
        int(m): Sample(parameters=params[levels == m], values=values[levels == m])
        for m in np.unique(levels)
    })
