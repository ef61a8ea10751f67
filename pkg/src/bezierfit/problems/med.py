"""Generalized three-objective location problem with a known quadratic front.

The objectives are squared distances to the first three basis vectors of R^4;
the Pareto set is the 2-simplex they span, so each front point is an exact
degree-2 polynomial in the barycentric parameter:

    f_m(t) = ||x*(t) - e_m||^2 = sum_j t_j^2 - 2 t_m + 1,   x*(t) = sum_j t_j e_j.
"""

from __future__ import annotations

import numpy as np

from ..fit import Sample, StratifiedSample
from ..simplex import sample_skeleton, sample_uniform_simplex, split_evenly, validate_point

DIMS = 3


def med_front_point(point: np.ndarray) -> np.ndarray:
    """Objective vector (f_1, f_2, f_3) at the Pareto-optimal x*(t)."""
    t = validate_point(point)
    if t.shape != (DIMS,):
        raise ValueError(f"point must have shape ({DIMS},), got {t.shape}")
    return med_front_points(t[None, :])[0]


def med_front_points(points: np.ndarray) -> np.ndarray:
    """Vectorized front map for an (n, 3) array of barycentric parameters."""
    t = np.asarray(points, dtype=float)
    sq = np.sum(t * t, axis=1, keepdims=True)
    return sq - 2.0 * t + 1.0


def med_sample(n: int, stratified: bool = False,
               rng: np.random.Generator | None = None,
               per_level: dict[int, int] | None = None,
               sigma: float = 0.0) -> Sample | StratifiedSample:
    """Exact front observations at uniformly drawn parameters.

    Front points carry no noise by default; ``sigma`` adds optional Gaussian
    noise for robustness studies.  Stratified mode spreads ``per_level``
    counts over skeleton levels (equal thirds of ``n`` when not given).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if rng is None:
        rng = np.random.default_rng()

    def observe(t: np.ndarray) -> np.ndarray:
        x = med_front_points(t)
        if sigma > 0:
            x = x + rng.normal(scale=sigma, size=x.shape)
        return x

    if not stratified:
        t = sample_uniform_simplex(DIMS, rng, size=n)
        return Sample(t, observe(t))
    if per_level is None:
        counts = split_evenly(n, DIMS)
        per_level = {m + 1: counts[m] for m in range(DIMS)}
    levels = {}
    for level in sorted(per_level):
        t = sample_skeleton(DIMS, level, per_level[level], rng)
        levels[level] = Sample(t, observe(t))
    return StratifiedSample(levels)
