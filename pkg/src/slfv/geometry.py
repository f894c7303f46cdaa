"""Torus arithmetic, disc geometry and the two-disc lens area.

All positions live on the square torus T(L) = [0, L)^2 with the side
length L carried by the caller, not stored on the points. Displacements
use the minimal-image convention, so every component lies in [-L/2, L/2)
and torus distance is the Euclidean norm of the minimal-image vector.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi


class TorusPoint(NamedTuple):
    """Canonical position on T(L): both coordinates in [0, L)."""

    x: float
    y: float


class Displacement(NamedTuple):
    """Minimal-image difference vector: each component in [-L/2, L/2)."""

    dx: float
    dy: float

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)


def _wrap1(v: float, L: float) -> float:
    w = v % L
    # float rounding can land exactly on L for tiny negative inputs
    if w >= L:
        w -= L
    return w


def _min_image1(d: float, L: float) -> float:
    d = d % L
    if d >= 0.5 * L:
        d -= L
    return d


def wrap(p: tuple[float, float], L: float) -> TorusPoint:
    """Reduce a raw coordinate pair to its canonical representative on T(L)."""
    if L <= 0:
        raise ValueError(f"torus side must be positive, got L={L}")
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinates {p!r}")
    return TorusPoint(_wrap1(x, L), _wrap1(y, L))


def displacement(a: TorusPoint, b: TorusPoint, L: float) -> Displacement:
    """Minimal-image vector d with b + d == a (mod L), componentwise."""
    return Displacement(_min_image1(a[0] - b[0], L), _min_image1(a[1] - b[1], L))


def distance(a: TorusPoint, b: TorusPoint, L: float) -> float:
    """Torus (minimal-image Euclidean) distance between two points."""
    return displacement(a, b, L).norm()


def ball_covers(center: TorusPoint, R: float, p: TorusPoint, L: float) -> bool:
    """True iff p lies in the closed ball of radius R around center."""
    return distance(center, p, L) <= R


def lens_area(R: float, d: float) -> float:
    """Area of the intersection of two radius-R discs with centers d apart.

    Exact formula: 2 R^2 arccos(d / 2R) - (d/2) sqrt(4 R^2 - d^2) for
    d <= 2R, zero beyond. Continuous and nonincreasing in d.
    """
    if R <= 0:
        raise ValueError(f"radius must be positive, got R={R}")
    if d < 0 or not math.isfinite(d):
        raise ValueError(f"center distance must be finite and >= 0, got d={d}")
    if d >= 2.0 * R:
        return 0.0
    half = 0.5 * d
    return 2.0 * R * R * math.acos(half / R) - half * math.sqrt(4.0 * R * R - d * d)


def sample_uniform_ball(
    center: TorusPoint, R: float, L: float, rng: np.random.Generator
) -> TorusPoint:
    """Uniform draw from the closed ball of radius R around center on T(L).

    Requires 2R < L so the ball does not wrap onto itself.
    """
    if 2.0 * R >= L:
        raise ValueError(f"ball of radius {R} self-overlaps on a torus of side {L}")
    r = R * math.sqrt(rng.random())
    theta = TWO_PI * rng.random()
    return TorusPoint(
        _wrap1(center[0] + r * math.cos(theta), L),
        _wrap1(center[1] + r * math.sin(theta), L),
    )
