"""Bezier simplex model: Bernstein features, design matrices, evaluation.

A Bezier simplex of degree D maps the standard (M-1)-simplex into R^L:

    b(t) = sum_d  multinomial(D, d) * t^d * p_d

with one control point p_d per multi-index d.  Control points are stored as
a matrix with one row per multi-index, in the canonical lattice order of
:mod:`bezierfit.simplex`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .simplex import (
    MultiIndex,
    enumerate_lattice,
    lattice_size,
    multinomial,
    nonzero_count,
)


def bernstein_features(point: np.ndarray, degree: int) -> np.ndarray:
    """Feature vector z(t) with component multinomial(D, d) * t^d per index.

    0^0 evaluates to 1, so vertex features are exact.  The entries are a
    partition of unity for any point on the simplex.
    """
    t = np.asarray(point, dtype=float)
    return design_matrix(t[None, :], degree)[0]


def design_matrix(points: np.ndarray, degree: int) -> np.ndarray:
    """Row-per-point feature matrix of shape (n_points, lattice_size)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"points must be 2-d (n, dims), got shape {pts.shape}")
    n, dims = pts.shape
    if n == 0:
        raise ValueError("points must be nonempty")
    lattice = enumerate_lattice(dims, degree)
    # Running powers t_i^k for k = 0..degree; 0.0**0 == 1.0 in numpy.
    powers = pts[:, :, None] ** np.arange(degree + 1)
    out = np.empty((n, len(lattice)))
    for j, d in enumerate(lattice):
        col = np.full(n, float(multinomial(degree, d)))
        for i, e in enumerate(d):
            if e:
                col = col * powers[:, i, e]
        out[:, j] = col
    return out


def partition_by_level(lattice: list[MultiIndex]) -> dict[int, list[int]]:
    """Group lattice positions by non-zero count (skeleton level).

    Keys are the levels that actually occur; groups are disjoint and cover
    the lattice.  The all-zero index of a degree-0 lattice lands on key 0.
    """
    if not lattice:
        raise ValueError("lattice must be nonempty")
    groups: dict[int, list[int]] = {}
    for pos, d in enumerate(lattice):
        groups.setdefault(nonzero_count(d), []).append(pos)
    return dict(sorted(groups.items()))


@dataclass
class BezierSimplex:
    """Immutable-by-convention model: (dims, degree, ambient_dim, control_points)."""

    dims: int
    degree: int
    ambient_dim: int
    control_points: np.ndarray
    lattice: list[MultiIndex] = field(init=False, repr=False)

    def __post_init__(self):
        self.control_points = np.asarray(self.control_points, dtype=float)
        expected = lattice_size(self.dims, self.degree)
        if self.control_points.shape != (expected, self.ambient_dim):
            raise ValueError(
                f"control_points must have shape ({expected}, {self.ambient_dim}), "
                f"got {self.control_points.shape}"
            )
        if not np.all(np.isfinite(self.control_points)):
            raise ValueError("control_points must be finite")
        self.lattice = enumerate_lattice(self.dims, self.degree)

    def __call__(self, point: np.ndarray) -> np.ndarray:
        return self.evaluate(point)

    def evaluate(self, point: np.ndarray) -> np.ndarray:
        """b(t) for a single barycentric point."""
        t = np.asarray(point, dtype=float)
        if t.shape != (self.dims,):
            raise ValueError(f"point must have shape ({self.dims},), got {t.shape}")
        return bernstein_features(t, self.degree) @ self.control_points

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """b(t) row-wise for an (n, dims) array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dims:
            raise ValueError(f"points must have shape (n, {self.dims}), got {pts.shape}")
        return design_matrix(pts, self.degree) @ self.control_points

    def levels(self) -> dict[int, list[int]]:
        return partition_by_level(self.lattice)

    def to_dict(self) -> dict:
        return {
            "M": self.dims,
            "D": self.degree,
            "L": self.ambient_dim,
            "control_points": self.control_points.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "BezierSimplex":
        return cls(
            dims=int(payload["M"]),
            degree=int(payload["D"]),
            ambient_dim=int(payload["L"]),
            control_points=np.asarray(payload["control_points"], dtype=float),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "BezierSimplex":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
