"""Model constants, their validation, and the derived scale quantities.

A parameter set describes the two-scale event dynamics on T(L): frequent
small reproduction events (radius R_s, impact u_s, parent-count law
lambda_s, recombination probability r) and rare large extinction /
recolonization events (radius R_B * L**alpha, impact u_B, parent-count
law lambda_B, per-area rate 1/(rho * L**(2*alpha))).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

PMF_TOL = 1e-12


def _pmf_ok(pmf: dict[int, float]) -> bool:
    if not pmf:
        return False
    if any((not isinstance(k, int)) or k < 1 for k in pmf):
        return False
    if any(v < 0 or not math.isfinite(v) for v in pmf.values()):
        return False
    return abs(sum(pmf.values()) - 1.0) <= PMF_TOL


@dataclass(frozen=True)
class ModelParams:
    """All model constants for one torus side L.

    ``beta`` (sampling-separation exponent) and ``separation`` (explicit
    vector) are alternative ways to state where the two individuals are
    sampled; at most one is needed and neither is required for
    same-individual runs.
    """

    L: float
    alpha: float
    R_s: float
    R_B: float
    u_s: float
    u_B: float
    rho: float
    r: float
    lambda_s: dict[int, float] = field(default_factory=lambda: {2: 1.0})
    lambda_B: dict[int, float] = field(default_factory=lambda: {2: 1.0})
    beta: float | None = None
    separation: tuple[float, float] | None = None
    rho_bound_C: float = 1.0

    @property
    def large_radius(self) -> float:
        return self.R_B * self.L**self.alpha

    def sampling_separation(self) -> tuple[float, float]:
        """Initial separation vector: explicit if given, else (L**beta, 0)."""
        if self.separation is not None:
            return (float(self.separation[0]), float(self.separation[1]))
        if self.beta is None:
            raise ValueError("neither beta nor separation given")
        return (self.L**self.beta, 0.0)


def validate(params: ModelParams) -> list[str]:
    """Check the standing assumptions.

    Returns the list of hard violations (empty iff all hard invariants
    hold). Soft bounds — the rho window log L <= rho <= C * L**(2 alpha)
    — are reported as warnings so out-of-window regimes stay explorable.
    Never raises.
    """
    p = params
    bad: list[str] = []
    if not (0.0 < p.u_s < 1.0):
        bad.append(f"u_s must lie in (0,1), got {p.u_s}")
    if not (0.0 < p.u_B < 1.0):
        bad.append(f"u_B must lie in (0,1), got {p.u_B}")
    if not (0.0 < p.r <= 1.0):
        bad.append(f"r must lie in (0,1], got {p.r}")
    if not (0.0 < p.alpha <= 1.0):
        bad.append(f"alpha must lie in (0,1], got {p.alpha}")
    if p.L <= 1.0:
        bad.append(f"L must exceed 1, got {p.L}")
    if p.R_s <= 0 or p.R_B <= 0:
        bad.append(f"radii must be positive, got R_s={p.R_s}, R_B={p.R_B}")
    if p.rho <= 0:
        bad.append(f"rho must be positive, got {p.rho}")
    if not _pmf_ok(p.lambda_s):
        bad.append("lambda_s is not a pmf on {1,2,...} summing to 1")
    elif p.lambda_s.get(1, 0.0) >= 1.0 - PMF_TOL:
        bad.append("lambda_s({1})<1 required")
    if not _pmf_ok(p.lambda_B):
        bad.append("lambda_B is not a pmf on {1,2,...} summing to 1")
    if p.L > 1.0:
        if not 2.0 * p.R_s < p.L / 2.0:
            bad.append(f"2*R_s={2 * p.R_s} must be < L/2={p.L / 2}")
        if not 2.0 * p.R_B * p.L**p.alpha < p.L / 2.0:
            bad.append(
                f"2*R_B*L^alpha={2 * p.R_B * p.L**p.alpha} must be < L/2={p.L / 2}"
            )
    if p.beta is not None and not (p.alpha < p.beta <= 1.0):
        bad.append(f"beta must lie in (alpha,1], got beta={p.beta}, alpha={p.alpha}")

    if not bad and p.rho > 0 and p.L > 1.0:
        if p.rho < math.log(p.L):
            warnings.warn(
                f"rho={p.rho} below log L={math.log(p.L):.4g}; "
                "large-event rarity outside the standing window",
                stacklevel=2,
            )
        if p.rho > p.rho_bound_C * p.L ** (2.0 * p.alpha):
            warnings.warn(
                f"rho={p.rho} above C*L^(2 alpha)="
                f"{p.rho_bound_C * p.L ** (2.0 * p.alpha):.4g}; "
                "large events may be too rare to drive coalescence",
                stacklevel=2,
            )
    return bad


def moment_integral(R: float) -> float:
    """I(R) = integral of x1^2 * lens_area(R, |x|) over the plane.

    Closed form pi^2 R^6 / 2; this is the second-moment integral behind
    the displacement-variance constant.
    """
    return 0.5 * math.pi**2 * R**6


def sigma2(params: ModelParams) -> float:
    """Per-coordinate displacement variance constant of a rescaled lineage.

    sigma2 = u_s*rho/(pi R_s^2 L^(2 alpha)) * I(R_s)
           + u_B /(pi R_B^2)                * I(R_B)
    with I(R) = pi^2 R^6/2. The torus-versus-plane correction vanishing
    with L is ignored (finite-L approximation).
    """
    p = params
    small = p.u_s * p.rho / (math.pi * p.R_s**2 * p.L ** (2.0 * p.alpha))
    large = p.u_B / (math.pi * p.R_B**2)
    return small * moment_integral(p.R_s) + large * moment_integral(p.R_B)


def gamma_finite(params: ModelParams) -> float:
    """Finite-L crossover exponent of coalescence vs effective recombination.

    alpha + log(1 + log(rho)/(r*rho)) / (2 log L). Close to alpha when
    r*rho >> log rho (fast recombination).
    """
    p = params
    return p.alpha + math.log1p(math.log(p.rho) / (p.r * p.rho)) / (2.0 * math.log(p.L))


def gamma_star(L: float, r: float) -> float:
    """Crossover exponent when only small events act: log(log(L)/r)/(2 log L).

    Any positive r is accepted (r = log L makes the exponent exactly 0).
    """
    if L < 3:
        raise ValueError(f"L must be >= 3, got {L}")
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    return math.log(math.log(L) / r) / (2.0 * math.log(L))


def d_star(params: ModelParams) -> float:
    """Critical sampling distance separating correlated from decorrelated loci.

    L**alpha * sqrt(1 + log(rho)/(r*rho)).
    """
    p = params
    return p.L**p.alpha * math.sqrt(1.0 + math.log(p.rho) / (p.r * p.rho))


@dataclass(frozen=True)
class DerivedScales:
    """Quantities computed from ModelParams, all in original units."""

    L: float
    alpha: float
    rho: float
    large_radius: float
    small_rate_per_block: float  # pi R_s^2, candidate events/time per mark
    large_rate_per_block: float  # pi R_B^2 / rho, candidate events/time per mark
    sigma2: float
    gamma_finite: float
    gamma_star: float
    d_star: float

    def timescale(self, t: float) -> float:
        """Exponential-regime threshold rho * L**(2 (t - alpha))."""
        return self.rho * self.L ** (2.0 * (t - self.alpha))

    @property
    def equilibrium_scale(self) -> float:
        """Linear-regime unit (1-alpha)/(2 pi sigma2) * rho L**(2(1-alpha)) log L."""
        return (
            (1.0 - self.alpha)
            / (2.0 * math.pi * self.sigma2)
            * self.rho
            * self.L ** (2.0 * (1.0 - self.alpha))
            * math.log(self.L)
        )


def derive(params: ModelParams) -> DerivedScales:
    """Compute all derived scales for a validated parameter set."""
    p = params
    return DerivedScales(
        L=p.L,
        alpha=p.alpha,
        rho=p.rho,
        large_radius=p.large_radius,
        small_rate_per_block=math.pi * p.R_s**2,
        large_rate_per_block=math.pi * p.R_B**2 / p.rho,
        sigma2=sigma2(p),
        gamma_finite=gamma_finite(p) if math.isfinite(p.rho) else p.alpha,
        gamma_star=gamma_star(p.L, p.r),
        d_star=d_star(p) if math.isfinite(p.rho) else p.L**p.alpha,
    )
