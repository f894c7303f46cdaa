"""Deterministic, parallel replicate runner and estimators.

Every replicate gets its own counter-based stream,
``Philox(key=(seed, replicate_index))``, so results are bit-identical
for a given (seed, replicates) regardless of worker count or
scheduling; aggregation concatenates per-replicate records in index
order. Censored stopping times are reported as bounds, never imputed.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import _kernels as K
from .params import ModelParams, derive

_MASK64 = (1 << 64) - 1

PAIR_CODES = ("01", "02", "03", "12", "13", "23")


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, reproducible stream for one replicate."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class EstimatorConfig:
    """Replicate count, base seed, censoring horizon and survival grid.

    ``t_grid`` holds exponential-regime exponents t (thresholds
    rho * L**(2(t - alpha))); ``phase2_grid`` holds multiples of the
    equilibrium scale. The horizon is in original time units and must
    dominate every threshold.
    """

    replicates: int
    seed: int
    horizon: float
    t_grid: tuple[float, ...] = ()
    phase2_grid: tuple[float, ...] = ()
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not (0.0 < self.confidence < 1.0):
            raise ValueError("confidence must lie in (0,1)")
        if list(self.t_grid) != sorted(self.t_grid):
            raise ValueError("t_grid must be sorted ascending")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")

    def thresholds(self, params: ModelParams) -> list[tuple[float, float]]:
        """(effective exponent, threshold time) rows, sorted by time.

        The effective exponent of any threshold s is
        alpha + ln(s / rho) / (2 ln L), so the exponent column stays
        meaningful for equilibrium-scale rows too.
        """
        d = derive(params)
        times = [d.timescale(t) for t in self.t_grid]
        times += [m * d.equilibrium_scale for m in self.phase2_grid]
        rows = []
        for s in sorted(times):
            expo = params.alpha + math.log(s / params.rho) / (2.0 * math.log(params.L))
            rows.append((expo, s))
        return rows


def wilson_interval(k: int, n: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class SurvivalPoint:
    t_exponent: float
    threshold_time: float
    survival: float
    ci_lo: float
    ci_hi: float
    n: int
    censored: int


@dataclass(frozen=True)
class SurvivalCurve:
    name: str
    points: tuple[SurvivalPoint, ...]

    def csv_rows(self) -> list[list]:
        return [
            [p.t_exponent, p.threshold_time, p.survival, p.ci_lo, p.ci_hi, p.n, p.censored]
            for p in self.points
        ]


CSV_HEADER_SURVIVAL = [
    "t_exponent",
    "threshold_time",
    "survival",
    "ci_lo",
    "ci_hi",
    "n",
    "censored",
]


# ---------------------------------------------------------------------------
# chunked replicate execution (module-level workers so they pickle)


def _chunk_bounds(n: int, workers: int) -> list[tuple[int, int]]:
    n_chunks = min(n, max(1, workers) * 4)
    edges = np.linspace(0, n, n_chunks + 1, dtype=np.int64)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _run_chunked(fn, arg_maker, n: int, workers: int) -> np.ndarray:
    bounds = _chunk_bounds(n, workers)
    if workers <= 1:
        parts = [fn(arg_maker(a, b)) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(fn, arg_maker(a, b)) for a, b in bounds]
            parts = [f.result() for f in futures]
    return np.concatenate(parts, axis=0)


def _chunk_pair(args) -> np.ndarray:
    params, seed, start, stop, horizon, sep = args
    kp = K.kernel_params(params)
    jmax = K.max_parents(kp)
    gd = 2.0 * params.R_B * params.L**params.alpha
    out = np.empty((stop - start, 2), dtype=np.float64)
    for i, idx in enumerate(range(start, stop)):
        rng = replicate_rng(seed, idx)
        tau, T, _ = K.run_pair(sep[0], sep[1], gd, horizon, kp, jmax, rng)
        out[i, 0] = tau
        out[i, 1] = T
    return out


def _chunk_two_locus(args) -> np.ndarray:
    params, seed, start, stop, horizon, sep = args
    kp = K.kernel_params(params)
    jmax = K.max_parents(kp)
    gd = 2.0 * params.R_B * params.L**params.alpha
    out = np.empty((stop - start, 6), dtype=np.float64)
    for i, idx in enumerate(range(start, stop)):
        rng = replicate_rng(seed, idx)
        out[i] = K.run_two_locus(sep[0], sep[1], gd, horizon, kp, jmax, rng)[:6]
    return out


def _chunk_recomb(args) -> np.ndarray:
    params, seed, start, stop, horizon = args
    kp = K.kernel_params(params)
    jmax = K.max_parents(kp)
    out = np.empty((stop - start, 1), dtype=np.float64)
    for i, idx in enumerate(range(start, stop)):
        rng = replicate_rng(seed, idx)
        s = K.run_effective_recomb(horizon, kp, jmax, rng)
        out[i, 0] = s / params.rho if s >= 0 else -1.0
    return out


def _chunk_snapshot(args) -> np.ndarray:
    params, seed, start, stop, t_target = args
    kp = K.kernel_params(params)
    jmax = K.max_parents(kp)
    out = np.empty((stop - start, 1), dtype=np.float64)
    for i, idx in enumerate(range(start, stop)):
        rng = replicate_rng(seed, idx)
        d = K.run_snapshot(t_target * params.rho, kp, jmax, rng)
        out[i, 0] = d / params.L**params.alpha
    return out


def _torus_dist(a: np.ndarray, b: np.ndarray, L: float) -> float:
    d = np.abs(a - b)
    d = np.minimum(d, L - d)
    return float(np.hypot(d[0], d[1]))


def _far_marks(L: float, target: float, spread: float, rng) -> np.ndarray:
    """Four uniform points conditioned on all pairwise distances in
    [target/spread, target*spread]; label-exchangeable by construction."""
    lo, hi = target / spread, target * spread
    while True:
        pts = rng.uniform(0.0, L, size=(4, 2))
        ok = True
        for i in range(4):
            for j in range(i + 1, 4):
                d = _torus_dist(pts[i], pts[j], L)
                if not (lo <= d <= hi):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return pts


def square_marks(L: float, diagonal: float) -> np.ndarray:
    """Vertices of a centered axis-aligned square with the given diagonal."""
    h = diagonal / (2.0 * math.sqrt(2.0))
    c = L / 2.0
    return np.array(
        [[c - h, c - h], [c + h, c - h], [c + h, c + h], [c - h, c + h]],
        dtype=np.float64,
    )


def _chunk_kingman(args) -> np.ndarray:
    params, seed, start, stop, horizon, init, diagonal, spread = args
    kp = K.kernel_params(params)
    jmax = K.max_parents(kp)
    out = np.empty((stop - start, 2), dtype=np.float64)
    fixed = square_marks(params.L, diagonal) if init == "square" else None
    target = params.L ** (params.beta if params.beta is not None else 0.85)
    for i, idx in enumerate(range(start, stop)):
        rng = replicate_rng(seed, idx)
        pts = fixed if fixed is not None else _far_marks(params.L, target, spread, rng)
        code, t = K.run_first_merge(
            np.ascontiguousarray(pts[:, 0]),
            np.ascontiguousarray(pts[:, 1]),
            horizon,
            kp,
            jmax,
            rng,
        )
        out[i, 0] = code
        out[i, 1] = t
    return out


# ---------------------------------------------------------------------------
# record producers


def pair_records(
    params: ModelParams,
    config: EstimatorConfig,
    workers: int = 1,
    separation: tuple[float, float] | None = None,
) -> np.ndarray:
    """(replicates, 2) array of (tau, T); -1 marks censoring."""
    sep = separation if separation is not None else params.sampling_separation()

    def make(a, b):
        return (params, config.seed, a, b, config.horizon, sep)

    return _run_chunked(_chunk_pair, make, config.replicates, workers)


def two_locus_records(
    params: ModelParams,
    config: EstimatorConfig,
    workers: int = 1,
    separation: tuple[float, float] | None = None,
) -> np.ndarray:
    """(replicates, 6) array of (tau_Aa, tau_Bb, T_Aa, T_Bb, ev_Aa, ev_Bb)."""
    sep = separation if separation is not None else params.sampling_separation()

    def make(a, b):
        return (params, config.seed, a, b, config.horizon, sep)

    return _run_chunked(_chunk_two_locus, make, config.replicates, workers)


def recombination_records(
    params: ModelParams, config: EstimatorConfig, workers: int = 1
) -> np.ndarray:
    """(replicates, 1) array of rescaled effective-recombination times."""

    def make(a, b):
        return (params, config.seed, a, b, config.horizon)

    return _run_chunked(_chunk_recomb, make, config.replicates, workers)


def snapshot_records(
    params: ModelParams, config: EstimatorConfig, t_snapshot: float, workers: int = 1
) -> np.ndarray:
    """(replicates, 1) array of rescaled separations at a fixed rescaled time."""

    def make(a, b):
        return (params, config.seed, a, b, t_snapshot)

    return _run_chunked(_chunk_snapshot, make, config.replicates, workers)


def kingman_records(
    params: ModelParams,
    config: EstimatorConfig,
    init: str = "far",
    diagonal: float | None = None,
    spread: float = 1.3,
    workers: int = 1,
) -> np.ndarray:
    """(replicates, 2) array of (pair code, merge time); code -1 censored,
    6 = merge involving more than one pair."""
    if init not in ("far", "square"):
        raise ValueError(f"unknown kingman init {init!r}")
    if diagonal is None:
        beta = params.beta if params.beta is not None else 0.85
        diagonal = params.L**beta

    def make(a, b):
        return (params, config.seed, a, b, config.horizon, init, diagonal, spread)

    return _run_chunked(_chunk_kingman, make, config.replicates, workers)


# ---------------------------------------------------------------------------
# estimators


def survival_curve_from_times(
    name: str,
    times: np.ndarray,
    censored: np.ndarray,
    horizon: float,
    thresholds: list[tuple[float, float]],
    confidence: float,
) -> SurvivalCurve:
    """Survival over shared replicates: one stopping time against all rows.

    A replicate censored at the horizon has stopping time > every
    threshold (the horizon dominates the grid), so indicators stay well
    defined and the curve is monotone by construction.
    """
    for _, s in thresholds:
        if s > horizon:
            raise ValueError(
                f"threshold {s} exceeds the horizon {horizon}; "
                "raise horizon_multiplier"
            )
    eff = np.where(censored, np.inf, times)
    n = times.shape[0]
    n_cens = int(censored.sum())
    pts = []
    for expo, s in thresholds:
        k = int((eff > s).sum())
        lo, hi = wilson_interval(k, n, confidence)
        pts.append(SurvivalPoint(expo, s, k / n, lo, hi, n, n_cens))
    return SurvivalCurve(name, tuple(pts))


def estimate_survival(
    kind: str,
    params: ModelParams,
    config: EstimatorConfig,
    workers: int = 1,
    records: np.ndarray | None = None,
) -> dict[str, SurvivalCurve]:
    """Survival curves for kind in {"single", "joint-min", "per-locus"}.

    Precomputed records (from pair_records / two_locus_records) may be
    passed to estimate several quantities from one simulation batch.
    """
    thr = config.thresholds(params)
    if kind == "single":
        rec = records if records is not None else pair_records(params, config, workers)
        tau = rec[:, 0]
        cens = tau < 0
        curve = survival_curve_from_times(
            "single", np.where(cens, config.horizon, tau), cens, config.horizon, thr,
            config.confidence,
        )
        return {"single": curve}
    rec = records if records is not None else two_locus_records(params, config, workers)
    tau_Aa, tau_Bb = rec[:, 0], rec[:, 1]
    cens_Aa, cens_Bb = tau_Aa < 0, tau_Bb < 0
    eff_Aa = np.where(cens_Aa, config.horizon, tau_Aa)
    eff_Bb = np.where(cens_Bb, config.horizon, tau_Bb)
    if kind == "joint-min":
        both = np.minimum(
            np.where(cens_Aa, np.inf, tau_Aa), np.where(cens_Bb, np.inf, tau_Bb)
        )
        cens = ~np.isfinite(both)
        curve = survival_curve_from_times(
            "joint_min", np.where(cens, config.horizon, both), cens, config.horizon,
            thr, config.confidence,
        )
        return {"joint_min": curve}
    if kind == "per-locus":
        return {
            "Aa": survival_curve_from_times(
                "Aa", eff_Aa, cens_Aa, config.horizon, thr, config.confidence
            ),
            "Bb": survival_curve_from_times(
                "Bb", eff_Bb, cens_Bb, config.horizon, thr, config.confidence
            ),
        }
    raise ValueError(f"unknown survival kind {kind!r}")


@dataclass(frozen=True)
class EqualCoalescence:
    probability: float
    ci_lo: float
    ci_hi: float
    n: int
    n_equal: int
    n_censored: int  # replicates where either locus was censored


def estimate_equal_coalescence(
    params: ModelParams,
    config: EstimatorConfig,
    workers: int = 1,
    records: np.ndarray | None = None,
) -> EqualCoalescence:
    """Fraction of replicates whose two coalescences happened in one event."""
    rec = records if records is not None else two_locus_records(params, config, workers)
    ev_Aa, ev_Bb = rec[:, 4], rec[:, 5]
    equal = (ev_Aa >= 0) & (ev_Aa == ev_Bb)
    n = rec.shape[0]
    k = int(equal.sum())
    lo, hi = wilson_interval(k, n, config.confidence)
    n_cens = int(((rec[:, 0] < 0) | (rec[:, 1] < 0)).sum())
    return EqualCoalescence(k / n, lo, hi, n, k, n_cens)


@dataclass(frozen=True)
class IbdEstimate:
    """Mean of exp(-2 theta tau) with censoring reported as a bracket.

    Censored replicates contribute 0 to the lower end and
    exp(-2 theta horizon) to the upper end; ci_lo/ci_hi extend the
    bracket ends by a normal-approximation confidence margin.
    """

    theta: float
    est_lo: float
    est_hi: float
    ci_lo: float
    ci_hi: float
    n: int
    n_censored: int


def _ibd_from_values(theta, lo_vals, hi_vals, n_cens, confidence) -> IbdEstimate:
    n = lo_vals.shape[0]
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    lo_m, hi_m = float(lo_vals.mean()), float(hi_vals.mean())
    lo_ci = lo_m - z * float(lo_vals.std(ddof=1)) / math.sqrt(n) if n > 1 else 0.0
    hi_ci = hi_m + z * float(hi_vals.std(ddof=1)) / math.sqrt(n) if n > 1 else 1.0
    return IbdEstimate(theta, lo_m, hi_m, max(0.0, lo_ci), min(1.0, hi_ci), n, n_cens)


def estimate_ibd(
    params: ModelParams,
    config: EstimatorConfig,
    thetas: list[float],
    workers: int = 1,
    records: np.ndarray | None = None,
) -> list[IbdEstimate]:
    """Single-locus identity by descent E[exp(-2 theta tau)] per theta."""
    rec = records if records is not None else pair_records(params, config, workers)
    tau = rec[:, 0]
    cens = tau < 0
    n_cens = int(cens.sum())
    out = []
    for theta in thetas:
        if theta < 0:
            raise ValueError("theta must be >= 0")
        base = np.exp(-2.0 * theta * np.where(cens, config.horizon, tau))
        lo_vals = np.where(cens, 0.0, base)
        hi_vals = base  # censored entries already equal exp(-2 theta horizon)
        out.append(_ibd_from_values(theta, lo_vals, hi_vals, n_cens, config.confidence))
    return out


def estimate_joint_ibd(
    params: ModelParams,
    config: EstimatorConfig,
    theta1: float,
    theta2: float,
    workers: int = 1,
    records: np.ndarray | None = None,
) -> tuple[IbdEstimate, IbdEstimate, IbdEstimate]:
    """(joint, marginal Aa, marginal Bb) estimates of two-locus IBD.

    joint = E[exp(-2 theta1 tau_Aa - 2 theta2 tau_Bb)]; the marginals
    from the same replicates support product-vs-joint comparisons.
    """
    rec = records if records is not None else two_locus_records(params, config, workers)
    tau_Aa = np.where(rec[:, 0] < 0, config.horizon, rec[:, 0])
    tau_Bb = np.where(rec[:, 1] < 0, config.horizon, rec[:, 1])
    cens_any = (rec[:, 0] < 0) | (rec[:, 1] < 0)
    f1 = np.exp(-2.0 * theta1 * tau_Aa)
    f2 = np.exp(-2.0 * theta2 * tau_Bb)
    joint = _ibd_from_values(
        theta1 + theta2,
        np.where(cens_any, 0.0, f1 * f2),
        f1 * f2,
        int(cens_any.sum()),
        config.confidence,
    )
    m1 = _ibd_from_values(
        theta1, np.where(rec[:, 0] < 0, 0.0, f1), f1, int((rec[:, 0] < 0).sum()),
        config.confidence,
    )
    m2 = _ibd_from_values(
        theta2, np.where(rec[:, 1] < 0, 0.0, f2), f2, int((rec[:, 1] < 0).sum()),
        config.confidence,
    )
    return joint, m1, m2


@dataclass(frozen=True)
class PairingDistribution:
    """First-merger identity over 4 lineages, plus goodness-of-fit stats.

    ``class_tests`` maps the initial pairwise distance of a symmetry
    class (for the square init: side and diagonal) to the equality
    chi-square within that class: (statistic, p-value, cell count).
    """

    counts: dict[str, int]
    frequencies: dict[str, float]  # over pair-resolved replicates
    n: int
    n_resolved: int
    n_multi: int
    n_censored: int
    chi2_uniform: float
    chi2_uniform_pvalue: float
    class_tests: dict[float, tuple[float, float, int]] = field(default_factory=dict)


def _chi2_equal(counts: np.ndarray) -> tuple[float, float]:
    total = counts.sum()
    if total == 0:
        return 0.0, 1.0
    expected = total / counts.shape[0]
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(stats.chi2.sf(stat, counts.shape[0] - 1))


def estimate_pairing_distribution(
    params: ModelParams,
    config: EstimatorConfig,
    init: str = "far",
    diagonal: float | None = None,
    workers: int = 1,
    records: np.ndarray | None = None,
) -> PairingDistribution:
    """Empirical first-merger distribution over the 6 unordered pairs.

    For the square init, equality is also tested within the two
    symmetry classes (the four side pairs and the two diagonal pairs).
    """
    rec = (
        records
        if records is not None
        else kingman_records(params, config, init, diagonal, workers=workers)
    )
    codes = rec[:, 0].astype(np.int64)
    counts = np.array([(codes == c).sum() for c in range(6)], dtype=np.int64)
    n_multi = int((codes == 6).sum())
    n_cens = int((codes < 0).sum())
    n_resolved = int(counts.sum())
    chi2_u, p_u = _chi2_equal(counts)
    freqs = {
        PAIR_CODES[c]: (counts[c] / n_resolved if n_resolved else 0.0)
        for c in range(6)
    }
    class_tests: dict[float, tuple[float, float, int]] = {}
    if init == "square":
        if diagonal is None:
            beta = params.beta if params.beta is not None else 0.85
            diagonal = params.L**beta
        pts = square_marks(params.L, diagonal)
        pair_idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        dists = [round(_torus_dist(pts[i], pts[j], params.L), 9) for i, j in pair_idx]
        for d in sorted(set(dists)):
            cells = [c for c in range(6) if dists[c] == d]
            if len(cells) > 1:
                stat, p = _chi2_equal(counts[cells])
                class_tests[d] = (stat, p, len(cells))
    return PairingDistribution(
        counts={PAIR_CODES[c]: int(counts[c]) for c in range(6)},
        frequencies=freqs,
        n=rec.shape[0],
        n_resolved=n_resolved,
        n_multi=n_multi,
        n_censored=n_cens,
        chi2_uniform=chi2_u,
        chi2_uniform_pvalue=p_u,
        class_tests=class_tests,
    )
