"""Closed-form large-torus asymptotics and identity-by-descent integrals.

Survival laws are functions of the sampling exponent beta (log of the
initial separation over log L), the large-event exponent alpha, and —
in the slowly recombining regime — the crossover exponent gamma where
the coalescence and effective-recombination timescales meet. The two
time regimes are the exponential one (thresholds rho L^(2(t-alpha)),
t in [beta,1]) and the linear equilibrium one beyond it.

IBD integrals are evaluated by adaptive quadrature at relative
tolerance 1e-8; integrand exponents are computed in the log domain so
huge decay factors underflow to exact zeros instead of misordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

QUAD_REL_TOL = 1e-8
_EXP_UNDERFLOW = 745.0  # exp(-exp(x)) is 0 beyond this exponent of the exponent
_SUPPORT_CUT = 70.0  # e^-70 ~ 4e-31 of the integrand max: truncation point


class NumericalError(RuntimeError):
    """Raised when a quadrature fails to reach its tolerance."""


@dataclass(frozen=True)
class AsymptoticInput:
    """Bundle of exponents and rates for the closed-form engine."""

    alpha: float
    beta: float
    L: float
    c_L: float
    t: float | None = None
    gamma: float | None = None
    theta: float | None = None
    theta1: float | None = None
    theta2: float | None = None

    def __post_init__(self) -> None:
        if not (self.alpha < self.beta <= 1.0):
            raise ValueError(
                f"need alpha < beta <= 1, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.c_L <= 0:
            raise ValueError(f"c_L must be positive, got {self.c_L}")


# ---------------------------------------------------------------------------
# survival laws


def single_locus_survival_phase1(t: float, alpha: float, beta: float) -> float:
    """P[single-locus coalescence survives rho L^(2(t-alpha))] = (b-a)/(t-a)."""
    if not (beta <= t <= 1.0):
        raise ValueError(f"t must lie in [beta,1]=[{beta},1], got {t}")
    if not (alpha < beta):
        raise ValueError(f"need alpha < beta, got {alpha}, {beta}")
    return (beta - alpha) / (t - alpha)


def single_locus_survival_phase2(t: float, alpha: float, beta: float) -> float:
    """Equilibrium regime: ((beta-alpha)/(1-alpha)) e^-t at t times the
    equilibrium scale."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if alpha >= 1.0:
        raise ValueError("the equilibrium regime needs alpha < 1")
    if not (alpha < beta <= 1.0):
        raise ValueError(f"need alpha < beta <= 1, got {alpha}, {beta}")
    return (beta - alpha) / (1.0 - alpha) * math.exp(-t)


def joint_survival_fast(t: float, alpha: float, beta: float, phase: int = 1) -> float:
    """Fast recombination: the two loci are independent, so the joint
    survival is the square of the single-locus value."""
    if phase == 1:
        return single_locus_survival_phase1(t, alpha, beta) ** 2
    if phase == 2:
        if t <= 0:
            raise ValueError(f"t must be positive, got {t}")
        if alpha >= 1.0:
            raise ValueError("the equilibrium regime needs alpha < 1")
        return ((beta - alpha) / (1.0 - alpha)) ** 2 * math.exp(-2.0 * t)
    raise ValueError(f"phase must be 1 or 2, got {phase}")


def joint_survival_slow(
    t: float, alpha: float, beta: float, gamma: float, phase: int = 1
) -> float:
    """Slow recombination: complete correlation up to the crossover
    exponent gamma, independent decay beyond it.

    Phase 1: (b-a)/(t-a) on [beta,gamma], (b-a)(g-a)/(t-a)^2 on (gamma,1];
    phase 2: (b-a)(g-a)/(1-a)^2 e^(-2t). Continuous at t = gamma.
    """
    if phase == 2:
        if t <= 0:
            raise ValueError(f"t must be positive, got {t}")
        return (
            (beta - alpha)
            * (gamma - alpha)
            / (1.0 - alpha) ** 2
            * math.exp(-2.0 * t)
        )
    if t < beta:
        raise ValueError(f"t must be >= beta={beta}, got {t}")
    if t <= gamma:
        return (beta - alpha) / (t - alpha)
    if t <= 1.0:
        return (beta - alpha) * (gamma - alpha) / (t - alpha) ** 2
    raise ValueError(f"t must lie in [beta,1], got {t}")


# ---------------------------------------------------------------------------
# IBD integrals


def _exp_factor(log_rate: float, u: float, logL: float) -> float:
    """exp(-w) with w = exp(log_rate + 2 u log L), evaluated safely."""
    lw = log_rate + 2.0 * u * logL
    if lw > _EXP_UNDERFLOW:
        return 0.0
    return math.exp(-math.exp(lw))


def _quad_piece(f: Callable[[float], float], a: float, b: float, cut: float) -> float:
    """Adaptive quadrature of f on [a,b], split at the decay cut point."""
    if b <= a:
        return 0.0
    pieces = []
    if a < cut < b:
        pieces = [(a, cut), (cut, b)]
    else:
        pieces = [(a, b)]
    total = 0.0
    for lo, hi in pieces:
        val, err = quad(f, lo, hi, epsabs=1e-300, epsrel=QUAD_REL_TOL, limit=200)
        if not math.isfinite(val):
            raise NumericalError(
                f"quadrature diverged on [{lo},{hi}]: value={val}, error={err}"
            )
        if err > max(abs(val) * math.sqrt(QUAD_REL_TOL), 1e-250) and err > 1e-12:
            raise NumericalError(
                f"quadrature failed to converge on [{lo},{hi}]: "
                f"value={val}, error estimate={err}"
            )
        total += val
    return total


def _phase1_integral(
    lo: float, hi: float, rate: float, shift: float, logL: float
) -> float:
    """Integral of exp(-rate L^(2u)) / (u - shift)^2 over [lo, hi]."""
    if hi <= lo:
        return 0.0
    if rate == 0.0:
        # exact antiderivative 1/(shift-u) ... evaluated directly
        return 1.0 / (lo - shift) - 1.0 / (hi - shift)
    log_rate = math.log(rate)
    # beyond u_cut the decay factor is below e^-70 of its maximum
    u_cut = (math.log(_SUPPORT_CUT) - log_rate) / (2.0 * logL)

    def f(u: float) -> float:
        return _exp_factor(log_rate, u, logL) / (u - shift) ** 2

    return _quad_piece(f, lo, hi, u_cut)


def _phase2_integral(rate: float, logL: float) -> float:
    """Integral of exp(-rate L^2 log L u) e^-u over [1/log L, inf).

    The integrand is exp(-(1+k)u) with k = rate L^2 log L; the improper
    tail is truncated where it falls below 1e-30 of its maximum (the
    truncated remainder is bounded by 1e-30 times the integral).
    """
    k = rate * math.exp(2.0 * logL) * logL if rate > 0 else 0.0
    if not math.isfinite(k):
        return 0.0
    a = 1.0 / logL
    one_k = 1.0 + k
    # maximum at a; points below 1e-30 of it beyond a + ln(1e30)/(1+k)
    b = a + math.log(1e30) / one_k

    def f(u: float) -> float:
        w = k * u
        if w > _EXP_UNDERFLOW:
            return 0.0
        return math.exp(-w - u)

    val, err = quad(f, a, b, epsabs=1e-300, epsrel=QUAD_REL_TOL, limit=200)
    if err > max(abs(val) * math.sqrt(QUAD_REL_TOL), 1e-250) and err > 1e-12:
        raise NumericalError(f"tail quadrature failed: value={val}, error={err}")
    return val


def ibd_single(
    beta: float,
    theta: float,
    c_L: float,
    L: float,
    alpha: float,
    with_large_events: bool = True,
    leading_only: bool = False,
) -> float:
    """Probability of identity by descent at one locus, sampling at L^beta.

    With large events:
      (b-a) int_b^1 exp(-2 th c_L L^(2u))/(u-a)^2 du
      + (b-a)/(1-a) int_{1/log L}^inf exp(-2 th c_L L^2 log L u) e^-u du.
    Without, the same shape with c_L -> 1 and alpha -> 0 (weights beta).
    ``leading_only`` drops the equilibrium-tail term (the plotted form).
    """
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    logL = math.log(L)
    if with_large_events:
        weight, shift, rate = beta - alpha, alpha, 2.0 * theta * c_L
    else:
        weight, shift, rate = beta, 0.0, 2.0 * theta
    if not (shift < beta <= 1.0):
        raise ValueError(f"need alpha < beta <= 1, got beta={beta}")
    term1 = weight * _phase1_integral(beta, 1.0, rate, shift, logL)
    if leading_only:
        return term1
    tail_weight = weight / (1.0 - shift)
    term2 = tail_weight * _phase2_integral(rate, logL)
    return term1 + term2


def ibd_double(
    beta: float,
    theta1: float,
    theta2: float,
    c_L: float,
    L: float,
    alpha: float,
    gamma: float,
    with_large_events: bool = True,
) -> float:
    """Probability of identity by descent at both loci (leading terms).

    A correlated part integrates the summed mutation rates from beta up
    to the crossover gamma; beyond gamma the loci decay independently
    and the expression is a product of one-locus integrals. gamma <= beta
    drops the correlated part (always-decorrelated regime); gamma >= 1
    drops the product (complete correlation). Without large events pass
    gamma = the small-event crossover (log(log L / r)/(2 log L)).
    """
    for th in (theta1, theta2):
        if th < 0:
            raise ValueError(f"mutation rates must be >= 0, got {th}")
    logL = math.log(L)
    if with_large_events:
        weight, shift, scale = beta - alpha, alpha, c_L
    else:
        weight, shift, scale = beta, 0.0, 1.0
    if not (shift < beta <= 1.0):
        raise ValueError(f"need shift < beta <= 1, got beta={beta}")
    g = min(max(gamma, beta), 1.0)
    term1 = weight * _phase1_integral(
        beta, g, 2.0 * (theta1 + theta2) * scale, shift, logL
    )
    i1 = _phase1_integral(g, 1.0, 2.0 * theta1 * scale, shift, logL)
    i2 = _phase1_integral(g, 1.0, 2.0 * theta2 * scale, shift, logL)
    return term1 + weight**2 * i1 * i2


# ---------------------------------------------------------------------------
# decay factors and vanishing points


def decay_factor_large(beta: float, theta: float, c_L: float, L: float) -> float:
    """exp(-2 theta c_L L^(2 beta)), the factor killing IBD with large events."""
    if theta * c_L == 0.0:
        return 1.0
    return _exp_factor(math.log(2.0 * theta * c_L), beta, math.log(L))


def decay_factor_small(beta: float, theta: float, L: float) -> float:
    """exp(-2 theta L^(2 beta)), the factor killing IBD without large events."""
    if theta == 0.0:
        return 1.0
    return _exp_factor(math.log(2.0 * theta), beta, math.log(L))


def vanishing_point(
    factor: Callable[[float], float],
    lo: float,
    hi: float,
    threshold: float = 0.01,
    tol: float = 1e-3,
) -> float | None:
    """beta where a nonincreasing decay factor crosses the threshold.

    Returns lo when the factor already sits at/below the threshold at
    the left edge, None when it never reaches it on [lo, hi].
    """
    if factor(lo) <= threshold:
        return lo
    if factor(hi) > threshold:
        return None
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if factor(mid) > threshold:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# curve builders for the CSV interfaces


def ibd_single_curves(
    betas, theta: float, c_L: float, L: float, alpha: float
) -> list[tuple[float, float, float]]:
    """Rows (beta, value with large events, value small-events-only)."""
    rows = []
    for b in betas:
        rows.append(
            (
                float(b),
                ibd_single(b, theta, c_L, L, alpha, True, leading_only=True),
                ibd_single(b, theta, 1.0, L, alpha, False, leading_only=True),
            )
        )
    return rows


def ibd_double_curves(
    betas,
    theta1: float,
    theta2: float,
    c_L: float,
    L: float,
    alpha: float,
    gamma_mid: float,
    gamma_small: float,
) -> list[tuple[float, float, float, float, float]]:
    """Rows (beta, complete-correlation, crossover at gamma_mid,
    always-decorrelated, small-events-only) of two-locus IBD."""
    rows = []
    for b in betas:
        rows.append(
            (
                float(b),
                ibd_double(b, theta1, theta2, c_L, L, alpha, 1.0, True),
                ibd_double(b, theta1, theta2, c_L, L, alpha, gamma_mid, True),
                ibd_double(b, theta1, theta2, c_L, L, alpha, alpha, True),
                ibd_double(b, theta1, theta2, 1.0, L, 0.0, gamma_small, False),
            )
        )
    return rows
