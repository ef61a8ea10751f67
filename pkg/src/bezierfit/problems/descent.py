"""Steepest-descent minimizers for the scalarized objectives.

Two step rules are provided:

* ``"armijo"`` - backtracking line search (shrink 0.5, slope factor 1e-4);
  needs the objective value and is the default.
* ``"exact"``  - exact minimizing step along the negative gradient, with the
  curvature taken from a gradient difference.  For a quadratic objective the
  gradient is affine, so the step is exact and no objective values are
  compared; this keeps progress possible even when the optimal value is large
  enough that objective differences fall below float resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import ConvergenceError

ARMIJO_SHRINK = 0.5
ARMIJO_SLOPE = 1e-4
MIN_STEP = 1e-20


@dataclass
class DescentResult:
    x: np.ndarray
    iterations: int
    gradient_norm: float
    converged: bool
    objective_trace: list[float] = field(default_factory=list)


def steepest_descent(grad: Callable[[np.ndarray], np.ndarray],
                     x0: np.ndarray,
                     step_rule: str = "armijo",
                     tol: float = 1e-8,
                     max_iter: int = 100_000,
                     objective: Callable[[np.ndarray], float] | None = None,
                     raise_on_failure: bool = True,
                     keep_trace: bool = False) -> DescentResult:
    """Minimize a smooth convex function by gradient descent.

    Stops when the gradient norm drops to ``tol``.  Non-convergence within
    ``max_iter`` (or a stalled line search) raises ConvergenceError carrying
    the final gradient norm unless ``raise_on_failure`` is false.
    """
    if step_rule not in ("armijo", "exact"):
        raise ValueError(f"unknown step rule {step_rule!r}")
    if step_rule == "armijo" and objective is None:
        raise ValueError("armijo step rule needs the objective callable")

    x = np.asarray(x0, dtype=float).copy()
    trace: list[float] = []
    if keep_trace and objective is not None:
        trace.append(float(objective(x)))
    step = 1.0
    iterations = 0
    g = np.asarray(grad(x), dtype=float)
    gnorm = float(np.linalg.norm(g))
    stalled = False
    while gnorm > tol and iterations < max_iter and not stalled:
        if step_rule == "exact":
            curvature = float(g @ (np.asarray(grad(x + g)) - g))
            if curvature <= 0:
                stalled = True
                break
            alpha = float(g @ g) / curvature
            x = x - alpha * g
        else:
            f0 = float(objective(x))
            g2 = float(g @ g)
            alpha = step
            while alpha >= MIN_STEP:
                candidate = x - alpha * g
                if float(objective(candidate)) <= f0 - ARMIJO_SLOPE * alpha * g2:
                    break
                alpha *= ARMIJO_SHRINK
            else:
                stalled = True
                break
            x = candidate
            step = alpha / ARMIJO_SHRINK  # let the step grow back slowly
        iterations += 1
        g = np.asarray(grad(x), dtype=float)
        gnorm = float(np.linalg.norm(g))
        if keep_trace and objective is not None:
            trace.append(float(objective(x)))
    converged = gnorm <= tol
    if not converged and raise_on_failure:
        raise ConvergenceError(
            f"steepest descent stopped after {iterations} iterations with "
            f"gradient norm {gnorm:.3e} > tol {tol:.1e}",
            gradient_norm=gnorm,
            iterations=iterations,
        )
    return DescentResult(x=x, iterations=iterations, gradient_norm=gnorm,
                         converged=converged, objective_trace=trace)


def quadratic_descent_batch(hessians: np.ndarray, linear: np.ndarray,
                            tol: float = 1e-8,
                            max_iter: int = 100_000) -> tuple[np.ndarray, np.ndarray]:
    """Steepest descent with exact steps on a batch of quadratics.

    Minimizes 0.5 x' H_b x + c_b' x for every b, starting from x = 0, all
    batch members advancing in lockstep until their own gradient norm reaches
    ``tol``.  Returns (solutions, converged_mask).  Matches the single-point
    solver with the "exact" rule on the same quadratic.
    """
    h = np.asarray(hessians, dtype=float)
    c = np.asarray(linear, dtype=float)
    nbatch, dim = c.shape
    x = np.zeros((nbatch, dim))
    active = np.ones(nbatch, dtype=bool)
    for _ in range(max_iter):
        g = np.einsum("bij,bj->bi", h, x) + c
        gnorm = np.linalg.norm(g, axis=1)
        active = gnorm > tol
        if not active.any():
            break
        hg = np.einsum("bij,bj->bi", h, g)
        curvature = np.einsum("bi,bi->b", g, hg)
        ok = active & (curvature > 0)
        alpha = np.zeros(nbatch)
        alpha[ok] = np.einsum("bi,bi->b", g, g)[ok] / curvature[ok]
        x = x - alpha[:, None] * g
    g = np.einsum("bij,bj->bi", h, x) + c
    return x, np.linalg.norm(g, axis=1) <= tol
