"""Synthetic fitting targets: a unit simplex embedded in R^L plus Gaussian noise."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bezier import BezierSimplex
from ..fit import Sample, StratifiedSample
from ..simplex import enumerate_lattice, sample_skeleton, sample_uniform_simplex


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic run: ambient dim L, simplex dim M, degree D,
    noise s.d. sigma, and either a flat count or per-level counts."""

    ambient_dim: int
    dims: int
    degree: int
    sigma: float = 0.0
    count: int | None = None
    per_level: dict[int, int] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.ambient_dim < self.dims:
            raise ValueError(
                f"unit-simplex target needs L >= M, got L={self.ambient_dim}, M={self.dims}"
            )
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")


def unit_simplex_model(spec: SyntheticSpec) -> BezierSimplex:
    """The true model: control point for index d is sum_j (d_j / D) e_j.

    With these control points the map is affine, b(t) = sum_j t_j e_j, so its
    image is the unit (M-1)-simplex spanned by the first M basis vectors of
    R^L.
    """
    lattice = enumerate_lattice(spec.dims, spec.degree)
    control = np.zeros((len(lattice), spec.ambient_dim))
    for row, d in enumerate(lattice):
        for j, dj in enumerate(d):
            control[row, j] = dj / spec.degree
    return BezierSimplex(spec.dims, spec.degree, spec.ambient_dim, control)


def _observe(model: BezierSimplex, points: np.ndarray, sigma: float,
             rng: np.random.Generator) -> np.ndarray:
    values = model.evaluate_many(points)
    if sigma > 0:
        values = values + rng.normal(scale=sigma, size=values.shape)
    return values


def synthetic_training_set(spec: SyntheticSpec, stratified: bool = False,
                           rng: np.random.Generator | None = None
                           ) -> Sample | StratifiedSample:
    """Draw a training set from the unit-simplex model with i.i.d. noise.

    Unstratified: ``spec.count`` points uniform on the whole simplex.
    Stratified: ``spec.per_level[m]`` points on each level-m skeleton.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    model = unit_simplex_model(spec)
    if not stratified:
        if spec.count is None:
            raise ValueError("unstratified sampling needs spec.count")
        pts = sample_uniform_simplex(spec.dims, rng, size=spec.count)
        return Sample(pts, _observe(model, pts, spec.sigma, rng))
    if not spec.per_level:
        raise ValueError("stratified sampling needs spec.per_level counts")
    levels = {}
    for level in sorted(spec.per_level):
        pts = sample_skeleton(spec.dims, level, spec.per_level[level], rng)
        levels[level] = Sample(pts, _observe(model, pts, spec.sigma, rng))
    return StratifiedSample(levels)
