#!/usr/bin/env python3
"""Overlay Monte Carlo survival estimates on the closed-form curve.

Usage: plot_survival_overlay.py SIM_CSV THEORY_CSV OUT_IMAGE

SIM_CSV needs the estimator contract (t_exponent, threshold_time,
survival, ci_lo, ci_hi, n, censored); THEORY_CSV needs t_exponent,
threshold_time, survival. The two grids must match row for row.
"""

import sys

from figlib import fail, load_columns, new_figure, save

SIM_COLS = ["t_exponent", "threshold_time", "survival", "ci_lo", "ci_hi", "n",
            "censored"]
THEORY_COLS = ["t_exponent", "threshold_time", "survival"]


def main(argv: list[str]) -> None:
    if len(argv) != 4:
        fail(f"usage: {argv[0]} SIM_CSV THEORY_CSV OUT_IMAGE")
    sim = load_columns(argv[1], SIM_COLS)
    th = load_columns(argv[2], THEORY_COLS)
    if len(sim["t_exponent"]) != len(th["t_exponent"]):
        fail(
            f"grid mismatch: {len(sim['t_exponent'])} simulation rows vs "
            f"{len(th['t_exponent'])} theory rows"
        )
    bad = [
        i
        for i, (a, b) in enumerate(zip(sim["t_exponent"], th["t_exponent"]))
        if abs(a - b) > 1e-9
    ]
    if bad:
        fail(f"grid mismatch at row(s) {bad}: exponents differ between inputs")
    fig, ax = new_figure()
    ax.plot(th["t_exponent"], th["survival"], "-", color="black",
            label="large-torus limit")
    lo = [s - l for s, l in zip(sim["survival"], sim["ci_lo"])]
    hi = [h - s for s, h in zip(sim["survival"], sim["ci_hi"])]
    ax.errorbar(sim["t_exponent"], sim["survival"], yerr=[lo, hi], fmt="o",
                color="black", capsize=3, label="simulation (CI)")
    ax.set_xlabel("time exponent t")
    ax.set_ylabel("survival probability")
    ax.legend()
    save(fig, argv[3])


if __name__ == "__main__":
    main(sys.argv)
