"""Asymptotic l2-risk calculus for the two fitting schemes.

Everything here is driven by two families of exact moment matrices over the
canonical lattice order:

* ``sigma_matrix``   - Gram matrix of the Bernstein basis under the uniform
  measure on the whole simplex.  It contracts second moments of control-point
  errors into the risk and yields the all-at-once closed form
  ``sigma2L * C(D + M - 1, D) / N``.
* ``lambda_matrix``  - Gram/cross-moment blocks of the basis under the uniform
  measure on each skeleton level.  Chaining their inverses reproduces how
  noise injected at one level of the inductive fit propagates to the levels
  above it, which gives the per-level risk coefficients c_m in
  ``R = sigma2L * sum_m c_m / N_m``.

Matrix entries are assembled with exact integer/rational arithmetic and only
then converted to floats, so factorial ratios never cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bezier import partition_by_level
from .simplex import (
    MultiIndex,
    enumerate_lattice,
    multinomial,
    nonzero_count,
)


# ---------------------------------------------------------------------------
# Moments


def simplex_moment_fraction(dims: int, exponents: MultiIndex) -> Fraction:
    """Exact E[t^q] for t uniform on the (dims-1)-simplex.

    Equals (dims-1)! * prod(q_i!) / (Q + dims - 1)! with Q = sum(q).
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    if any(q < 0 for q in exponents) or len(exponents) != dims:
        raise ValueError(f"exponents must be {dims} non-negative integers, got {exponents}")
    total = sum(exponents)
    num = math.factorial(dims - 1)
    for q in exponents:
        num *= math.factorial(q)
    return Fraction(num, math.factorial(total + dims - 1))


def simplex_moment(dims: int, exponents: MultiIndex) -> float:
    return float(simplex_moment_fraction(dims, exponents))


def skeleton_moment_fraction(dims: int, level: int, exponents: MultiIndex) -> Fraction:
    """Exact E[t^q] for t uniform on the level-``level`` skeleton.

    Non-zero only when the support of q matches the level exactly: the
    monomial vanishes on every subsimplex that does not contain the support,
    and a support smaller than ``level`` never occurs in the cross-moment
    blocks this feeds (their row index always carries ``level`` non-zeros).
    For a matching support the single contributing subsimplex integrates to
    prod(q_i!) / (Q + level - 1)!, and the (level-1)! / C(dims, level)
    prefactor normalizes the skeleton measure.
    """
    if not 1 <= level <= dims:
        raise ValueError(f"level must be in 1..{dims}, got {level}")
    if any(q < 0 for q in exponents) or len(exponents) != dims:
        raise ValueError(f"exponents must be {dims} non-negative integers, got {exponents}")
    if nonzero_count(exponents) != level:
        return Fraction(0)
    total = sum(exponents)
    num = math.factorial(level - 1)
    for q in exponents:
        num *= math.factorial(q)
    den = math.comb(dims, level) * math.factorial(total + level - 1)
    return Fraction(num, den)


def skeleton_moment(dims: int, level: int, exponents: MultiIndex) -> float:
    return float(skeleton_moment_fraction(dims, level, exponents))


# ---------------------------------------------------------------------------
# Sigma


def sigma_matrix(dims: int, degree: int) -> np.ndarray:
    """Symmetric positive-definite basis Gram matrix in canonical order.

    Entry (A, B) = multinomial(D, d_A) * multinomial(D, d_B)
                   * E[t^(d_A + d_B)]  over the uniform simplex measure.
    The noise scale sigma^2 * L is deliberately excluded.
    """
    lattice = enumerate_lattice(dims, degree)
    n = len(lattice)
    coeffs = [multinomial(degree, d) for d in lattice]
    out = np.empty((n, n))
    for a, da in enumerate(lattice):
        for b in range(a, n):
            db = lattice[b]
            q = tuple(x + y for x, y in zip(da, db))
            val = float(coeffs[a] * coeffs[b] * simplex_moment_fraction(dims, q))
            out[a, b] = val
            out[b, a] = val
    return out


def sigma_cholesky_pivots(dims: int, degree: int) -> np.ndarray:
    """Diagonal of the Cholesky factor of sigma_matrix; all positive iff PD."""
    return np.diag(np.linalg.cholesky(sigma_matrix(dims, degree)))


def hadamard_identity_check(dims: int, degree: int) -> float:
    """sum_{A,B} Sigma_AB * (Sigma^-1)_AB; equals C(D + M - 1, D)."""
    sigma = sigma_matrix(dims, degree)
    return float(np.sum(sigma * np.linalg.inv(sigma)))


def aao_risk(dims: int, degree: int, sigma2L: float = 1.0, n: int = 1) -> float:
    """Asymptotic all-at-once risk sigma2L * C(D + M - 1, D) / N."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sigma2L * math.comb(degree + dims - 1, degree) / n


def theorem2_risk(dims: int, degree: int, p_second_moment: np.ndarray) -> float:
    """Contract a control-point second-moment surrogate against Sigma."""
    sigma = sigma_matrix(dims, degree)
    p2 = np.asarray(p_second_moment, dtype=float)
    if p2.shape != sigma.shape:
        raise ValueError(f"second-moment matrix must have shape {sigma.shape}, got {p2.shape}")
    return float(np.sum(sigma * p2))


# ---------------------------------------------------------------------------
# Lambda blocks


@dataclass(frozen=True)
class LambdaMatrix:
    """Cross-moment block between skeleton levels ``m`` (rows) and ``k`` (cols)."""

    m: int
    k: int
    row_indices: tuple[MultiIndex, ...]
    col_indices: tuple[MultiIndex, ...]
    entries: np.ndarray


def _level_indices(dims: int, degree: int) -> dict[int, list[MultiIndex]]:
    lattice = enumerate_lattice(dims, degree)
    return {
        level: [lattice[p] for p in positions]
        for level, positions in partition_by_level(lattice).items()
    }


def _lambda_block(dims: int, degree: int, m: int, k: int,
                  level_indices: dict[int, list[MultiIndex]]) -> np.ndarray:
    rows = level_indices[m]
    cols = level_indices[k]
    out = np.empty((len(rows), len(cols)))
    for a, dm in enumerate(rows):
        cm = multinomial(degree, dm)
        for b, dk in enumerate(cols):
            q = tuple(x + y for x, y in zip(dm, dk))
            out[a, b] = float(
                cm * multinomial(degree, dk) * skeleton_moment_fraction(dims, m, q)
            )
    return out


def lambda_matrix(dims: int, degree: int, m: int, k: int) -> LambdaMatrix:
    """Block of basis cross-moments under the level-``m`` skeleton measure.

    Rows run over level-m multi-indices, columns over level-k ones
    (1 <= k <= m <= min(dims, degree)); an entry is zero unless the column
    support is contained in the row support.
    """
    top = min(dims, degree)
    if not 1 <= k <= m <= top:
        raise ValueError(f"need 1 <= k <= m <= {top}, got m={m}, k={k}")
    level_indices = _level_indices(dims, degree)
    return LambdaMatrix(
        m=m,
        k=k,
        row_indices=tuple(level_indices[m]),
        col_indices=tuple(level_indices[k]),
        entries=_lambda_block(dims, degree, m, k, level_indices),
    )


# ---------------------------------------------------------------------------
# Inductive-skeleton risk coefficients


@dataclass(frozen=True)
class RiskModel:
    """Per-level risk coefficients: R = scale * sum_m c_m / N_m.

    ``kind`` is "aao" (single coefficient keyed 0, meaning c / N) or "isk"
    (one coefficient per skeleton level 1..min(M, D)).
    """

    kind: str
    dims: int
    degree: int
    coefficients: dict[int, float]
    scale: float = 1.0

    def risk_at(self, counts: dict[int, int]) -> float:
        """Evaluate sum of scale * c_m / counts[m]."""
        total = 0.0
        for level, coeff in self.coefficients.items():
            n_m = counts[level]
            if n_m <= 0:
                raise ValueError(f"count for level {level} must be positive, got {n_m}")
            total += coeff / n_m
        return self.scale * total


def aao_risk_model(dims: int, degree: int, scale: float = 1.0) -> RiskModel:
    return RiskModel(
        kind="aao",
        dims=dims,
        degree=degree,
        coefficients={0: float(math.comb(degree + dims - 1, degree))},
        scale=scale,
    )


def isk_risk_coefficients(dims: int, degree: int, scale: float = 1.0) -> RiskModel:
    """Per-level coefficients of the asymptotic inductive-skeleton risk.

    Noise entering the stage-m solve contaminates every stage above it; the
    total weight of a level is assembled by chaining inverse level Grams along
    every strictly descending path of levels, with alternating sign per step,
    exactly mirroring how each stage subtracts the already-fixed lower-level
    contributions.  Contracting those blocks against Sigma collects the
    coefficient of 1 / N_m for each level m.
    """
    top = min(dims, degree)
    if top < 1:
        raise ValueError(
            f"no skeleton levels for dims={dims}, degree={degree}; need min >= 1"
        )
    level_indices = _level_indices(dims, degree)
    lattice = enumerate_lattice(dims, degree)
    positions = partition_by_level(lattice)
    sigma = sigma_matrix(dims, degree)

    gram = {}      # (m, k) -> level-m-measure cross block
    gram_inv = {}  # m -> inverse of the diagonal block
    for m in range(1, top + 1):
        for k in range(1, m + 1):
            gram[(m, k)] = _lambda_block(dims, degree, m, k, level_indices)
        diag = gram[(m, m)]
        try:
            inv = np.linalg.inv(diag)
        except np.linalg.LinAlgError as exc:
            raise ArithmeticError(
                f"level-{m} basis Gram is singular for dims={dims}, degree={degree}"
            ) from exc
        gram_inv[m] = inv

    # walk[(i, m)]: signed sum over descending level paths i -> m of
    #   inv(i) @ gram[i, k1] @ inv(k1) @ ... @ gram[k_r, m] @ inv(m)
    walk: dict[tuple[int, int], np.ndarray] = {}
    for i in range(1, top + 1):
        walk[(i, i)] = gram_inv[i]
        for m in range(i - 1, 0, -1):
            acc = np.zeros((len(level_indices[i]), len(level_indices[m])))
            for k in range(m, i):
                acc -= gram_inv[i] @ gram[(i, k)] @ walk[(k, m)]
            walk[(i, m)] = acc

    coefficients: dict[int, float] = {}
    for m in range(1, top + 1):
        total = 0.0
        for i in range(m, top + 1):
            rows = positions[i]
            for j in range(m, top + 1):
                cols = positions[j]
                block = walk[(i, m)] @ gram[(m, m)] @ walk[(j, m)].T
                total += float(np.sum(sigma[np.ix_(rows, cols)] * block))
        coefficients[m] = total
    return RiskModel(kind="isk", dims=dims, degree=degree,
                     coefficients=coefficients, scale=scale)


# ---------------------------------------------------------------------------
# Optimal allocation


@dataclass(frozen=True)
class Allocation:
    """Integer per-level sample sizes plus the continuous-optimum risk."""

    total: int
    per_level: dict[int, int]
    fractions: dict[int, float]
    minimized_risk: float


def optimal_allocation(model: RiskModel, total: int) -> Allocation:
    """Minimize sum c_m / N_m subject to sum N_m = total, N_m > 0.

    The continuous optimum puts N_m proportional to sqrt(c_m) (the two-level
    closed form (a + b + 2 sqrt(ab)) / N is the special case); the integer
    allocation rounds it by largest remainder with ties toward higher levels,
    then enforces a minimum of one sample per level.  ``minimized_risk`` is
    evaluated at the continuous optimum.
    """
    if model.kind != "isk":
        raise ValueError(f"allocation needs an isk risk model, got kind={model.kind!r}")
    levels = sorted(model.coefficients)
    if total < len(levels):
        raise ValueError(f"total {total} is below the number of levels {len(levels)}")
    roots = {m: math.sqrt(model.coefficients[m]) for m in levels}
    root_sum = sum(roots.values())
    fractions = {m: roots[m] / root_sum for m in levels}
    minimized = model.scale * root_sum ** 2 / total

    quotas = {m: total * fractions[m] for m in levels}
    counts = {m: int(math.floor(quotas[m])) for m in levels}
    leftover = total - sum(counts.values())
    # Largest remainder; ties go to the higher level.
    order = sorted(levels, key=lambda m: (quotas[m] - counts[m], m), reverse=True)
    for m in order[:leftover]:
        counts[m] += 1
    for m in levels:
        while counts[m] == 0:
            donor = max(levels, key=lambda x: counts[x])
            counts[donor] -= 1
            counts[m] += 1
    return Allocation(total=total, per_level=counts, fractions=fractions,
                      minimized_risk=minimized)
