"""Backward-in-time event stream restricted to balls covering a lineage.

Only events whose ball covers at least one current mark can change the
ancestral process, so the stream is thinned to exactly those: per kind,
candidates arrive at rate n * pi * radius^2 * intensity, each candidate
centers on a uniformly chosen mark's ball and is accepted with
probability 1/(number of covered marks), which reproduces the
union-of-balls intensity without computing union areas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .geometry import TorusPoint
from .params import ModelParams


@dataclass(frozen=True)
class Event:
    """One accepted reproduction (small) or extinction/recolonization
    (large) event.

    ``dt`` is the waiting time since the previous accepted event,
    including the time spent on rejected candidates.
    """

    dt: float
    center: TorusPoint
    kind: str  # "small" | "large"
    radius: float
    impact: float
    num_parents: int
    parent_positions: tuple[TorusPoint, ...]


def sample_num_parents(pmf: dict[int, float], rng: np.random.Generator) -> int:
    """Draw a parent count from a finite pmf on {1, 2, ...}."""
    vals, cdf = K.pmf_arrays(pmf)
    return int(K._sample_pmf(vals, cdf, rng))


def next_event(
    marks: list[TorusPoint], params: ModelParams, rng: np.random.Generator
) -> Event:
    """Next accepted event for the given marks.

    Over each kind independently, events covering at least one mark
    occur as a Poisson process with intensity (area of the union of the
    marks' balls) * (per-area rate).
    """
    if not marks:
        raise ValueError("marks must be nonempty")
    if len(marks) > 4:
        raise ValueError(f"at most 4 marks supported, got {len(marks)}")
    kp = K.kernel_params(params)
    n = len(marks)
    xs = np.array([m[0] for m in marks], dtype=np.float64)
    ys = np.array([m[1] for m in marks], dtype=np.float64)
    covered = np.empty(n, np.bool_)
    dt, kind, cx, cy = K.propose_accepted(
        xs, ys, n, kp[0], kp[1], kp[2], kp[6], kp[7], rng, covered
    )
    jmax = K.max_parents(kp)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    if kind == K.KIND_SMALL:
        j = int(K.sample_parents(cx, cy, kp[1], kp[0], kp[8], kp[9], rng, px, py))
        radius, impact = kp[1], params.u_s
    else:
        j = int(K.sample_parents(cx, cy, kp[2], kp[0], kp[10], kp[11], rng, px, py))
        radius, impact = kp[2], params.u_B
    return Event(
        dt=float(dt),
        center=TorusPoint(float(cx), float(cy)),
        kind="small" if kind == K.KIND_SMALL else "large",
        radius=float(radius),
        impact=float(impact),
        num_parents=j,
        parent_positions=tuple(
            TorusPoint(float(px[i]), float(py[i])) for i in range(j)
        ),
    )
