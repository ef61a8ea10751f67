"""Experiment harness: seeded trials, MSE evaluation, and report emission.

A trial generates training data for the chosen problem, fits with the chosen
method, draws a fresh uniform test set, and scores the mean squared error
against the true surface.  Per-trial seeds derive deterministically from the
config seed, and methods compared in one run share each trial's test points,
so method deltas are paired.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .bezier import BezierSimplex
from .errors import BezierFitError
from .fit import Sample, StratifiedSample, fit_all_at_once, fit_inductive_skeleton
from .problems import (
    SyntheticSpec,
    group_lasso_front_sample,
    load_regression_dataset,
    med_front_points,
    med_sample,
    scalarized_quadratic,
    synthetic_training_set,
    unit_simplex_model,
)
from .problems.descent import quadratic_descent_batch
from .problems.group_lasso import _front_values
from .risk import aao_risk, isk_risk_coefficients, optimal_allocation
from .simplex import sample_uniform_simplex, split_evenly

PROBLEMS = ("synthetic", "med", "grouplasso")
METHODS = ("aao", "isk-optimal", "isk-equal")
DEFAULT_TEST_SIZE = {"synthetic": 10_000, "med": 10_000, "grouplasso": 1_000}


@dataclass
class ExperimentConfig:
    problem: str = "synthetic"
    method: str = "aao"
    ambient_dim: int = 100
    dims: int = 8
    degree: int = 2
    n_train: int = 1000
    sigma: float = 0.1
    trials: int = 20
    test_size: int | None = None
    seed: int = 0
    eps: float = 1e-4
    dataset_path: str | None = None
    equal_split_all_levels: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.problem == "med" and self.dims != 3:
            self.dims = 3
        if self.problem == "grouplasso":
            self.dims = 3
            self.sigma = 0.0
        if self.problem in ("med", "grouplasso"):
            self.ambient_dim = 3
        if self.test_size is None:
            self.test_size = DEFAULT_TEST_SIZE[self.problem]
        if self.test_size < 1:
            raise ValueError(f"test_size must be >= 1, got {self.test_size}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)


@dataclass
class ExperimentReport:
    config: dict
    mses: list[float]
    mean: float
    std: float
    quartiles: tuple[float, float, float]
    theoretical_risk: float | None
    allocation: dict[int, int] | None
    wall_time: float

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "mses": self.mses,
            "mean": self.mean,
            "std": self.std,
            "quartiles": list(self.quartiles),
            "theoretical_risk": self.theoretical_risk,
            "allocation": self.allocation,
            "wall_time": self.wall_time,
        }


def evaluate_mse(model: BezierSimplex, truth: Callable[[np.ndarray], np.ndarray],
                 test_points: np.ndarray) -> float:
    """Mean over test points of ||truth(t) - model(t)||^2."""
    pts = np.asarray(test_points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("test points must be a nonempty (n, dims) array")
    gap = truth(pts) - model.evaluate_many(pts)
    return float(np.mean(np.sum(gap * gap, axis=1)))


def _training_levels(config: ExperimentConfig) -> dict[int, int]:
    """Per-level counts for the stratified methods."""
    top = min(config.dims, config.degree)
    if config.method == "isk-optimal":
        risk_model = isk_risk_coefficients(config.dims, config.degree)
        return optimal_allocation(risk_model, config.n_train).per_level
    n_levels = config.dims if config.equal_split_all_levels else top
    counts = split_evenly(config.n_train, n_levels)
    return {m + 1: counts[m] for m in range(n_levels)}


class _Runner:
    """Problem-specific data generation and truth oracles."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        if config.problem == "grouplasso":
            self.dataset = load_regression_dataset(config.dataset_path)

    def truth_values(self, points: np.ndarray) -> np.ndarray:
        cfg = self.config
        if cfg.problem == "synthetic":
            spec = SyntheticSpec(cfg.ambient_dim, cfg.dims, cfg.degree, cfg.sigma)
            return unit_simplex_model(spec).evaluate_many(points)
        if cfg.problem == "med":
            return med_front_points(points)
        hessians, linear = scalarized_quadratic(self.dataset, points, cfg.eps)
        solutions, ok = quadratic_descent_batch(hessians, linear)
        if not ok.all():
            raise BezierFitError("test-point scalarizations failed to converge")
        return _front_values(self.dataset, solutions, cfg.eps)

    def training_sample(self, rng: np.random.Generator) -> Sample | StratifiedSample:
        cfg = self.config
        stratified = cfg.method != "aao"
        per_level = _training_levels(cfg) if stratified else None
        if cfg.problem == "synthetic":
            spec = SyntheticSpec(cfg.ambient_dim, cfg.dims, cfg.degree, cfg.sigma,
                                 count=cfg.n_train, per_level=per_level or {})
            return synthetic_training_set(spec, stratified=stratified, rng=rng)
        if cfg.problem == "med":
            return med_sample(cfg.n_train, stratified=stratified, rng=rng,
                              per_level=per_level, sigma=cfg.sigma)
        return group_lasso_front_sample(self.dataset, cfg.n_train,
                                        stratified=stratified, eps=cfg.eps,
                                        rng=rng, per_level=per_level)

    def fit(self, sample: Sample | StratifiedSample) -> BezierSimplex:
        if isinstance(sample, Sample):
            return fit_all_at_once(sample, self.config.degree)
        return fit_inductive_skeleton(sample, self.config.degree)


def _trial_rngs(seed: int, trial: int, method: str):
    train = np.random.default_rng([seed, trial, METHODS.index(method)])
    test = np.random.default_rng([seed, trial, 1000])
    return train, test


def theoretical_risk(config: ExperimentConfig) -> float | None:
    """Asymptotic risk prediction for synthetic runs, None otherwise."""
    if config.problem != "synthetic":
        return None
    scale = config.sigma**2 * config.ambient_dim
    if config.method == "aao":
        return aao_risk(config.dims, config.degree, sigma2L=scale, n=config.n_train)
    model = isk_risk_coefficients(config.dims, config.degree, scale=scale)
    counts = _training_levels(config)
    usable = {m: counts[m] for m in model.coefficients}
    return model.risk_at(usable)


def run_trial(config: ExperimentConfig, trial: int,
              runner: _Runner | None = None) -> float:
    """One seeded train/fit/test cycle; returns the trial MSE."""
    runner = runner or _Runner(config)
    train_rng, test_rng = _trial_rngs(config.seed, trial, config.method)
    try:
        sample = runner.training_sample(train_rng)
        model = runner.fit(sample)
    except BezierFitError as exc:
        raise type(exc)(f"trial {trial}: {exc}") from exc
    test_points = sample_uniform_simplex(config.dims, test_rng, size=config.test_size)
    return evaluate_mse(model, runner.truth_values, test_points)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """All trials of one (problem, method) cell, aggregated."""
    start = time.perf_counter()
    runner = _Runner(config)
    indices = list(range(config.trials))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            mses = list(pool.map(lambda i: run_trial(config, i, runner), indices))
    else:
        mses = [run_trial(config, i, runner) for i in indices]
    arr = np.asarray(mses)
    q1, q2, q3 = np.percentile(arr, [25, 50, 75])
    allocation = _training_levels(config) if config.method != "aao" else None
    return ExperimentReport(
        config=config.to_dict(),
        mses=[float(v) for v in mses],
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
        quartiles=(float(q1), float(q2), float(q3)),
        theoretical_risk=theoretical_risk(config),
        allocation=allocation,
        wall_time=time.perf_counter() - start,
    )


def welch_one_sided(lower: list[float], higher: list[float]) -> dict:
    """Welch t-test of mean(lower) < mean(higher); p from scipy."""
    from scipy.stats import ttest_ind

    stat = ttest_ind(lower, higher, equal_var=False, alternative="less")
    return {"t": float(stat.statistic), "p": float(stat.pvalue)}


def run_comparison(base: ExperimentConfig, methods: list[str]) -> dict:
    """Run several methods with paired seeds and attach Welch statistics."""
    reports = {}
    for method in methods:
        cfg_dict = base.to_dict()
        cfg_dict["method"] = method
        reports[method] = run_experiment(ExperimentConfig.from_dict(cfg_dict))
    welch = {}
    for i, a in enumerate(methods):
        for b in methods[i + 1:]:
            welch[f"{a}<{b}"] = welch_one_sided(reports[a].mses, reports[b].mses)
    return {
        "reports": {m: r.to_dict() for m, r in reports.items()},
        "welch_one_sided": welch,
    }


# ---------------------------------------------------------------------------
# Report emission


def emit_report(report: ExperimentReport | dict, fmt: str = "json", path=None) -> str:
    """Serialize a report; writes to ``path`` when given, returns the text."""
    payload = report.to_dict() if isinstance(report, ExperimentReport) else report
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if "mses" not in payload:
            raise ValueError("csv format requires a single-method report")
        import io

        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["trial", "mse"])
        for i, value in enumerate(payload["mses"]):
            writer.writerow([i, repr(value)])
        writer.writerow([
            "summary",
            json.dumps({k: payload[k] for k in
                        ("mean", "std", "quartiles", "theoretical_risk")},
                       sort_keys=True),
        ])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
