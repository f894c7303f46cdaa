"""Trajectory runners: coalescence, gathering, effective recombination,
separation exit, decorrelation snapshots, and first-merger identity.

Stopping times are recorded in original time units; rescaled views
(time / rho, distance / L**alpha) are computed on output where a runner
reports them. Censored runs carry the horizon value and a flag, never a
fake time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .geometry import TorusPoint
from .params import ModelParams

#: default censoring horizon, as a multiple of timescale(1) = rho * L**(2-2a)
DEFAULT_HORIZON_MULTIPLIER = 50.0

PAIR_NAMES = ("Aa", "AB", "Ab", "aB", "ab", "Bb")  # lexicographic index pairs


def default_horizon(params: ModelParams) -> float:
    return DEFAULT_HORIZON_MULTIPLIER * params.rho * params.L ** (
        2.0 * (1.0 - params.alpha)
    )


@dataclass(frozen=True)
class PairResult:
    """Single-locus pair run: first-gathering and coalescence times."""

    tau: float
    T: float
    tau_censored: bool
    T_censored: bool
    horizon: float
    n_events: int


@dataclass(frozen=True)
class RunRecord:
    """Two-locus run: per-locus coalescence and gathering times.

    ``equal_coalescence`` is True iff both coalescences happened in the
    same event (hence at the same time). Censored fields hold the
    horizon value.
    """

    tau_Aa: float
    tau_Bb: float
    T_Aa: float
    T_Bb: float
    tau_Aa_censored: bool
    tau_Bb_censored: bool
    T_Aa_censored: bool
    T_Bb_censored: bool
    equal_coalescence: bool
    horizon: float
    n_events: int


def _gather_distance(params: ModelParams) -> float:
    return 2.0 * params.R_B * params.L**params.alpha


def run_single_locus_pair(
    params: ModelParams,
    separation: tuple[float, float],
    horizon: float,
    rng: np.random.Generator,
) -> PairResult:
    """Simulate blocks {A}, {a} until they merge or the horizon passes."""
    kp = K.kernel_params(params)
    tau, T, ev = K.run_pair(
        float(separation[0]),
        float(separation[1]),
        _gather_distance(params),
        float(horizon),
        kp,
        K.max_parents(kp),
        rng,
    )
    return PairResult(
        tau=horizon if tau < 0 else tau,
        T=horizon if T < 0 else T,
        tau_censored=tau < 0,
        T_censored=T < 0,
        horizon=horizon,
        n_events=int(ev),
    )


def run_two_locus(
    params: ModelParams,
    separation: tuple[float, float],
    horizon: float,
    rng: np.random.Generator,
) -> RunRecord:
    """Simulate {A,B}, {a,b} until both loci have coalesced or the horizon."""
    kp = K.kernel_params(params)
    tau_Aa, tau_Bb, T_Aa, T_Bb, ev_Aa, ev_Bb, ev = K.run_two_locus(
        float(separation[0]),
        float(separation[1]),
        _gather_distance(params),
        float(horizon),
        kp,
        K.max_parents(kp),
        rng,
    )
    return RunRecord(
        tau_Aa=horizon if tau_Aa < 0 else tau_Aa,
        tau_Bb=horizon if tau_Bb < 0 else tau_Bb,
        T_Aa=horizon if T_Aa < 0 else T_Aa,
        T_Bb=horizon if T_Bb < 0 else T_Bb,
        tau_Aa_censored=tau_Aa < 0,
        tau_Bb_censored=tau_Bb < 0,
        T_Aa_censored=T_Aa < 0,
        T_Bb_censored=T_Bb < 0,
        equal_coalescence=(ev_Aa >= 0 and ev_Aa == ev_Bb),
        horizon=horizon,
        n_events=int(ev),
    )


def run_effective_recombination(
    params: ModelParams, horizon: float, rng: np.random.Generator
) -> float | None:
    """First rescaled time a large event lands an impact success while the
    two loci of one individual occupy distinct blocks.

    Starts from the single block {A,B}. Returns time / rho, or None if
    censored (in particular, always None in the r -> 0 limit where the
    block never splits).
    """
    kp = K.kernel_params(params)
    s = K.run_effective_recomb(float(horizon), kp, K.max_parents(kp), rng)
    return None if s < 0 else float(s) / params.rho


def run_separation_exit(
    params: ModelParams, horizon: float, rng: np.random.Generator
) -> float | None:
    """First rescaled time the two loci's separation exceeds 3 R_B (rescaled).

    Starts from the single block {A,B}. Returns time / rho or None.
    """
    kp = K.kernel_params(params)
    exit_d = 3.0 * params.R_B * params.L**params.alpha
    t = K.run_separation_exit(exit_d, float(horizon), kp, K.max_parents(kp), rng)
    return None if t < 0 else float(t) / params.rho


def run_decorrelation_snapshot(
    params: ModelParams, T_snapshot: float, rng: np.random.Generator
) -> float:
    """Rescaled separation |X_AB| at the fixed rescaled time T_snapshot.

    Returns 0.0 if the loci share a block at that instant.
    """
    if T_snapshot < 0:
        raise ValueError("snapshot time must be >= 0")
    if T_snapshot == 0.0:
        return 0.0
    kp = K.kernel_params(params)
    d = K.run_snapshot(
        float(T_snapshot) * params.rho, kp, K.max_parents(kp), rng
    )
    return float(d) / params.L**params.alpha


def run_kingman_pairing(
    params: ModelParams,
    marks: list[TorusPoint],
    horizon: float,
    rng: np.random.Generator,
) -> tuple[str | None, float]:
    """Four one-locus lineages; identity of the first merging pair.

    Returns (pair, time) where pair is "01".."23" (indices into marks),
    "multi" when the first merge involves more than a single pair, or
    None if censored.
    """
    if len(marks) != 4:
        raise ValueError("exactly 4 marks required")
    kp = K.kernel_params(params)
    mx = np.array([m[0] for m in marks], dtype=np.float64)
    my = np.array([m[1] for m in marks], dtype=np.float64)
    code, t = K.run_first_merge(
        mx, my, float(horizon), kp, K.max_parents(kp), rng
    )
    if code < 0:
        return None, float(horizon)
    if code == 6:
        return "multi", float(t)
    pairs = ("01", "02", "03", "12", "13", "23")
    return pairs[code], float(t)


def single_lineage_variance_rate(params: ModelParams) -> float:
    """Closed-form per-coordinate displacement variance per unit time.

    u_s pi R_s^4 / 2 + u_B pi (R_B L^alpha)^4 / (2 rho L^(2 alpha));
    the large term vanishes when rho is infinite.
    """
    p = params
    small = p.u_s * math.pi * p.R_s**4 / 2.0
    if not math.isfinite(p.rho):
        return small
    R_l = p.R_B * p.L**p.alpha
    return small + p.u_B * math.pi * R_l**4 / (2.0 * p.rho * p.L ** (2.0 * p.alpha))
