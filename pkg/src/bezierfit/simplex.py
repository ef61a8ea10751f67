"""Simplex-lattice combinatorics and uniform sampling on simplices and skeletons.

Conventions used throughout the package:

* A *multi-index* is a tuple of ``dims`` non-negative integers summing to the
  degree; the set of all of them is enumerated in reverse-lexicographic order,
  and that order is THE canonical row/column order of every matrix built here.
* A *subsimplex mask* is a 0/1 tuple of length ``dims`` selecting which
  barycentric coordinates may be non-zero.
* Skeleton *level* ``m`` counts non-zero coordinates, ``m = 1 .. dims``; i.e.
  level ``m`` is the union of all (m-1)-dimensional faces.  (Level 1 is the
  vertex set, level ``dims`` the whole simplex.)
* Points are numpy vectors of barycentric coordinates: non-negative, summing
  to one within ``COORD_SUM_TOL``.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

COORD_SUM_TOL = 1e-12

MultiIndex = tuple[int, ...]
SubsimplexMask = tuple[int, ...]


def lattice_size(dims: int, degree: int) -> int:
    """Number of multi-indices: C(degree + dims - 1, dims - 1)."""
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    return math.comb(degree + dims - 1, dims - 1)


def enumerate_lattice(dims: int, degree: int) -> list[MultiIndex]:
    """All length-``dims`` compositions of ``degree``, reverse-lexicographic.

    The first entry is (degree, 0, ..., 0), the last (0, ..., 0, degree).
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if dims == 1:
        return [(degree,)]
    out: list[MultiIndex] = []
    for head in range(degree, -1, -1):
        out.extend((head,) + tail for tail in enumerate_lattice(dims - 1, degree - head))
    return out


def multinomial(degree: int, exponents: MultiIndex) -> int:
    """Exact integer degree! / prod(exponents_i!)."""
    if any(e < 0 for e in exponents):
        raise ValueError(f"exponents must be non-negative, got {exponents}")
    if sum(exponents) != degree:
        raise ValueError(
            f"exponents {exponents} sum to {sum(exponents)}, expected degree {degree}"
        )
    value = math.factorial(degree)
    for e in exponents:
        value //= math.factorial(e)
    return value


def nonzero_count(exponents: MultiIndex) -> int:
    return sum(1 for e in exponents if e != 0)


def nonzero_pattern(exponents: MultiIndex) -> SubsimplexMask:
    """0/1 mask of the support of a multi-index; rejects the all-zero index."""
    if all(e == 0 for e in exponents):
        raise ValueError("all-zero multi-index has no subsimplex pattern")
    return tuple(1 if e > 0 else 0 for e in exponents)


def enumerate_subsimplices(dims: int, level: int) -> list[SubsimplexMask]:
    """All C(dims, level) masks with ``level`` ones, in combination order."""
    if not 1 <= level <= dims:
        raise ValueError(f"level must be in 1..{dims}, got {level}")
    masks = []
    for support in combinations(range(dims), level):
        mask = [0] * dims
        for i in support:
            mask[i] = 1
        masks.append(tuple(mask))
    return masks


def sample_uniform_simplex(dims: int, rng: np.random.Generator,
                           size: int | None = None) -> np.ndarray:
    """Uniform draws from the standard (dims-1)-simplex.

    Uses normalized exponential spacings (flat Dirichlet).  Returns shape
    (dims,) when ``size`` is None, else (size, dims).
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    n = 1 if size is None else size
    if dims == 1:
        pts = np.ones((n, 1))
    else:
        g = rng.exponential(scale=1.0, size=(n, dims))
        pts = g / g.sum(axis=1, keepdims=True)
    return pts[0] if size is None else pts


def split_evenly(n: int, parts: int) -> list[int]:
    """Split ``n`` into ``parts`` counts differing by at most one.

    The remainder goes round-robin to the earliest parts.
    """
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    base, rem = divmod(n, parts)
    return [base + (1 if i < rem else 0) for i in range(parts)]


def sample_skeleton(dims: int, level: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform on the level-``level`` skeleton, shape (n, dims).

    The points are split as evenly as possible across the C(dims, level)
    subsimplices (round-robin remainder in mask order); within a subsimplex
    they are uniform on that (level-1)-simplex, embedded through the mask.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    masks = enumerate_subsimplices(dims, level)
    counts = split_evenly(n, len(masks))
    out = np.zeros((n, dims))
    row = 0
    for mask, count in zip(masks, counts):
        if count == 0:
            continue
        support = [i for i, bit in enumerate(mask) if bit]
        inner = sample_uniform_simplex(level, rng, size=count)
        out[row:row + count, support] = inner
        row += count
    return out


def validate_point(point: np.ndarray) -> np.ndarray:
    """Check barycentric-coordinate invariants; returns the point as ndarray."""
    t = np.asarray(point, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError(f"point must be a 1-d vector, got shape {t.shape}")
    if np.any(t < 0):
        raise ValueError(f"barycentric coordinates must be non-negative: {t}")
    if abs(t.sum() - 1.0) > COORD_SUM_TOL:
        raise ValueError(f"barycentric coordinates must sum to 1, got {t.sum()!r}")
    return t
