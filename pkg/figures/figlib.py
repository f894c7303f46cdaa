"""Shared plumbing for the figure scripts: CSV intake and deterministic SVG.

The scripts are pure consumers of the analysis CSVs; they never
recompute model quantities. Output bytes are deterministic for fixed
inputs (fixed hash salt, no embedded dates).
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figures"
import matplotlib.pyplot as plt  # noqa: E402


def fail(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)
    sys.exit(1)


def load_columns(path: str, required: list[str]) -> dict[str, list[float]]:
    p = Path(path)
    if not p.exists():
        fail(f"no such file: {path}")
    with p.open() as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            fail(f"{path} is missing column(s) {missing}; found {header}")
        cols: dict[str, list[float]] = {c: [] for c in required}
        for row in reader:
            for c in required:
                cols[c].append(float(row[c]))
    if not cols[required[0]]:
        fail(f"{path} has no data rows")
    return cols


def load_sidecar(csv_path: str) -> dict | None:
    p = Path(csv_path)
    sidecar = p.with_name(p.name.replace(".csv", ".meta.json"))
    if sidecar.exists():
        return json.loads(sidecar.read_text())
    return None


def check_nonincreasing(name: str, values: list[float]) -> None:
    for a, b in zip(values, values[1:]):
        if b > a + 1e-12:
            fail(f"pre-check failed: column {name} is not nonincreasing")


def check_dominates(hi_name: str, hi: list[float], lo_name: str, lo: list[float]) -> None:
    for a, b in zip(hi, lo):
        if a < b - 1e-12:
            fail(f"pre-check failed: {hi_name} does not dominate {lo_name}")


def new_figure():
    return plt.subplots(figsize=(6.0, 4.0), dpi=100)


def save(fig, out_path: str) -> None:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    plt.close(fig)
