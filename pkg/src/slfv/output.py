"""CSV and metadata-sidecar persistence.

Every CSV has a header row; floats are serialized with 17 significant
digits so round-trips are lossless and reruns are byte-comparable.
Sidecars record the full effective configuration (plus seed and code
version) so any output file can be regenerated exactly.
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_csv(path: Path | str, header: list[str], rows: list[list]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def read_csv(path: Path | str) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def write_sidecar(path: Path | str, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
