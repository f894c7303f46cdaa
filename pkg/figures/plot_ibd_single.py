#!/usr/bin/env python3
"""Plot single-locus identity-by-descent against the sampling exponent.

Usage: plot_ibd_single.py IN_CSV OUT_IMAGE

IN_CSV needs columns beta, value_large, value_small (the `theory ibd1`
output). Solid line: small and large events; dash-dot: small only.
"""

import sys

from figlib import check_nonincreasing, fail, load_columns, new_figure, save


def main(argv: list[str]) -> None:
    if len(argv) != 3:
        fail(f"usage: {argv[0]} IN_CSV OUT_IMAGE")
    cols = load_columns(argv[1], ["beta", "value_large", "value_small"])
    check_nonincreasing("value_large", cols["value_large"])
    check_nonincreasing("value_small", cols["value_small"])
    fig, ax = new_figure()
    ax.plot(cols["beta"], cols["value_large"], "-", color="black",
            label="small and large events")
    ax.plot(cols["beta"], cols["value_small"], "-.", color="black",
            label="small events only")
    ax.set_xlabel(r"sampling exponent $\beta$")
    ax.set_ylabel("probability of identity by descent")
    ax.legend()
    save(fig, argv[2])


if __name__ == "__main__":
    main(sys.argv)
