#!/usr/bin/env python3
"""Plot two-locus identity-by-descent against the sampling exponent.

Usage: plot_ibd_double.py IN_CSV OUT_IMAGE

IN_CSV needs columns beta, v_gamma_ge1, v_gamma_mid, v_gamma_le_alpha,
v_no_large (the `theory ibd2` output). Styles: solid = complete
correlation, dashed = crossover regime, dotted = always decorrelated,
dash-dot = small events only. The crossover exponent named in the
legend comes from the CSV's sidecar when present.
"""

import sys

from figlib import (
    check_dominates,
    check_nonincreasing,
    fail,
    load_columns,
    load_sidecar,
    new_figure,
    save,
)

COLUMNS = ["beta", "v_gamma_ge1", "v_gamma_mid", "v_gamma_le_alpha", "v_no_large"]


def main(argv: list[str]) -> None:
    if len(argv) != 3:
        fail(f"usage: {argv[0]} IN_CSV OUT_IMAGE")
    cols = load_columns(argv[1], COLUMNS)
    for c in COLUMNS[1:]:
        check_nonincreasing(c, cols[c])
    check_dominates("v_gamma_ge1", cols["v_gamma_ge1"], "v_gamma_mid", cols["v_gamma_mid"])
    check_dominates("v_gamma_mid", cols["v_gamma_mid"], "v_gamma_le_alpha",
                    cols["v_gamma_le_alpha"])
    meta = load_sidecar(argv[1])
    gamma_mid = meta.get("gamma_mid") if meta else None
    gamma_star = meta.get("gamma_star") if meta else None
    mid_label = (
        rf"crossover at $\gamma={gamma_mid:g}$" if gamma_mid is not None
        else "crossover regime"
    )
    small_label = (
        rf"small events only ($\gamma^*={gamma_star:.3g}$)" if gamma_star is not None
        else "small events only"
    )
    fig, ax = new_figure()
    ax.plot(cols["beta"], cols["v_gamma_ge1"], "-", color="black",
            label=r"complete correlation ($\gamma \geq 1$)")
    ax.plot(cols["beta"], cols["v_gamma_mid"], "--", color="black", label=mid_label)
    ax.plot(cols["beta"], cols["v_gamma_le_alpha"], ":", color="black",
            label=r"always decorrelated ($\gamma \leq \alpha$)")
    ax.plot(cols["beta"], cols["v_no_large"], "-.", color="black", label=small_label)
    ax.set_xlabel(r"sampling exponent $\beta$")
    ax.set_ylabel("probability of identity by descent at both loci")
    ax.legend()
    save(fig, argv[2])


if __name__ == "__main__":
    main(sys.argv)
