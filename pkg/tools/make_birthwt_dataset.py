#!/usr/bin/env python3
"""Regenerate the bundled grouped-feature birth-weight extract.

The canonical source would be the 189-row Baystate Medical Center birth-weight
table (age and mother's weight as predictors, birth weight in grams as the
response).  That table is not redistributable from this environment, so this
script synthesizes a surrogate with the published summary structure:

    age: years, 14..45, mean ~23.2, s.d. ~5.3
    lwt: pounds, 80..250, mean ~129.8, s.d. ~30.6
    bwt: grams, 709..4990, mean ~2944.6, s.d. ~729.2
    corr(age, lwt) ~ 0.18, corr(age, bwt) ~ 0.09, corr(lwt, bwt) ~ 0.19

The grouped features are cubic-polynomial expansions: ageK / lwtK is the K-th
power of the standardized base variable, re-standardized column-wise by the
loader.  Powers of the *standardized* variable keep the three columns of a
group far from collinear, which keeps every scalarized Hessian well
conditioned.

Run from the repository root:  python tools/make_birthwt_dataset.py
"""

import csv
import pathlib

import numpy as np

N_ROWS = 189
SEED = 20240229
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "bezierfit" / "data" / "birthwt_groups.csv"


def main() -> None:
    rng = np.random.default_rng(SEED)
    corr_age_lwt = 0.18
    z = rng.multivariate_normal(
        mean=[0.0, 0.0],
        cov=[[1.0, corr_age_lwt], [corr_age_lwt, 1.0]],
        size=N_ROWS,
    )
    age = np.clip(np.round(23.2 + 5.3 * z[:, 0]), 14, 45)
    lwt = np.clip(np.round(129.8 + 30.6 * np.exp(0.45 * z[:, 1]) / np.exp(0.45**2 / 2) - 30.6), 80, 250)

    # Response correlated with both predictors (alpha + beta*rho = corr targets).
    za = (age - age.mean()) / age.std()
    zl = (lwt - lwt.mean()) / lwt.std()
    rho = float(np.corrcoef(za, zl)[0, 1])
    beta = (0.19 - 0.09 * rho) / (1 - rho**2)
    alpha = 0.09 - beta * rho
    noise_scale = np.sqrt(max(1e-6, 1 - (alpha**2 + beta**2 + 2 * alpha * beta * rho)))
    bwt_z = alpha * za + beta * zl + noise_scale * rng.standard_normal(N_ROWS)
    bwt = np.clip(np.round(2944.59 + 729.2 * (bwt_z - bwt_z.mean()) / bwt_z.std()), 709, 4990)

    def powers(base: np.ndarray) -> np.ndarray:
        zb = (base - base.mean()) / base.std()
        return np.column_stack([zb, zb**2, zb**3])

    table = np.column_stack([powers(age), powers(lwt), bwt])
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["age1", "age2", "age3", "lwt1", "lwt2", "lwt3", "bwt"])
        for row in table:
            writer.writerow([f"{v:.10g}" for v in row])
    print(f"wrote {OUT} ({N_ROWS} rows)")


if __name__ == "__main__":
    main()
