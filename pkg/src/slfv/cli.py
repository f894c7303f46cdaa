"""Batch command-line entry point.

Subcommands:
  theory ibd1|ibd2|survival|scales   closed-form curves and scale constants
  sim pair|two-locus|recomb|kingman|decorr   Monte Carlo estimation
  validate                           built-in oracle suite

One JSON config file drives a run (flags only override file paths,
workers and seed); every output CSV gets a metadata sidecar recording
the full effective config. Exit codes: 0 success, 1 validation-suite
failure, 2 config error, 3 runtime numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import _kernels as K
from . import montecarlo as mc
from . import theory
from .geometry import lens_area
from .observables import single_lineage_variance_rate
from .output import write_csv, write_sidecar
from .params import ModelParams, derive, validate


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# config loading


def _expect(section: dict, name: str, field: str, types, required=True, default=None):
    if field not in section:
        if required:
            raise ConfigError(f"missing required field '{name}.{field}'")
        return default
    v = section[field]
    if not isinstance(v, types) or isinstance(v, bool):
        raise ConfigError(
            f"field '{name}.{field}' has wrong type {type(v).__name__}"
        )
    if isinstance(v, (int, float)) and not math.isfinite(v):
        raise ConfigError(f"field '{name}.{field}' must be finite, got {v}")
    return v


def _check_keys(section: dict, name: str, allowed: set[str]) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown field(s) in '{name}': {sorted(unknown)}")


def _pmf(section: dict, name: str, field: str) -> dict[int, float]:
    raw = _expect(section, name, field, dict)
    out: dict[int, float] = {}
    for k, v in raw.items():
        try:
            ki = int(k)
        except ValueError:
            raise ConfigError(f"'{name}.{field}' key {k!r} is not an integer")
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"'{name}.{field}[{k}]' must be a finite number")
        out[ki] = float(v)
    return out


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(
        cfg,
        "config",
        {"model", "estimator", "output", "theory", "pair", "two_locus", "recomb",
         "kingman", "decorr"},
    )
    return cfg


def parse_model(cfg: dict) -> ModelParams:
    if "model" not in cfg:
        raise ConfigError("missing required section 'model'")
    m = cfg["model"]
    _check_keys(
        m,
        "model",
        {"L", "alpha", "R_s", "R_B", "u_s", "u_B", "rho", "r", "lambda_s",
         "lambda_B", "beta", "separation", "rho_bound_C"},
    )
    sep = _expect(m, "model", "separation", list, required=False)
    if sep is not None:
        if len(sep) != 2 or not all(
            isinstance(x, (int, float)) and math.isfinite(x) for x in sep
        ):
            raise ConfigError("'model.separation' must be [x, y] with finite numbers")
        sep = (float(sep[0]), float(sep[1]))
    params = ModelParams(
        L=float(_expect(m, "model", "L", (int, float))),
        alpha=float(_expect(m, "model", "alpha", (int, float))),
        R_s=float(_expect(m, "model", "R_s", (int, float))),
        R_B=float(_expect(m, "model", "R_B", (int, float))),
        u_s=float(_expect(m, "model", "u_s", (int, float))),
        u_B=float(_expect(m, "model", "u_B", (int, float))),
        rho=float(_expect(m, "model", "rho", (int, float))),
        r=float(_expect(m, "model", "r", (int, float))),
        lambda_s=_pmf(m, "model", "lambda_s"),
        lambda_B=_pmf(m, "model", "lambda_B"),
        beta=_expect(m, "model", "beta", (int, float), required=False),
        separation=sep,
        rho_bound_C=float(
            _expect(m, "model", "rho_bound_C", (int, float), required=False, default=1.0)
        ),
    )
    bad = validate(params)
    if bad:
        raise ConfigError("invalid model parameters: " + "; ".join(bad))
    return params


def parse_estimator(cfg: dict, params: ModelParams) -> mc.EstimatorConfig:
    if "estimator" not in cfg:
        raise ConfigError("missing required section 'estimator'")
    e = cfg["estimator"]
    _check_keys(
        e,
        "estimator",
        {"replicates", "seed", "horizon_multiplier", "t_grid", "phase2_grid",
         "confidence"},
    )
    seed = int(_expect(e, "estimator", "seed", int))
    env_seed = os.environ.get("SLFV_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"SLFV_SEED must be an integer, got {env_seed!r}")
    mult = float(
        _expect(e, "estimator", "horizon_multiplier", (int, float), required=False,
                default=50.0)
    )
    t_grid = _expect(e, "estimator", "t_grid", list, required=False, default=[])
    p2_grid = _expect(e, "estimator", "phase2_grid", list, required=False, default=[])
    for g, nm in ((t_grid, "t_grid"), (p2_grid, "phase2_grid")):
        if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in g):
            raise ConfigError(f"'estimator.{nm}' must contain finite numbers")
    horizon = mult * params.rho * params.L ** (2.0 * (1.0 - params.alpha))
    try:
        return mc.EstimatorConfig(
            replicates=int(_expect(e, "estimator", "replicates", int)),
            seed=seed,
            horizon=horizon,
            t_grid=tuple(float(x) for x in t_grid),
            phase2_grid=tuple(float(x) for x in p2_grid),
            confidence=float(
                _expect(e, "estimator", "confidence", (int, float), required=False,
                        default=0.95)
            ),
        )
    except ValueError as err:
        raise ConfigError(f"invalid estimator section: {err}")


def parse_output(cfg: dict) -> tuple[Path, str]:
    if "output" not in cfg:
        raise ConfigError("missing required section 'output'")
    o = cfg["output"]
    _check_keys(o, "output", {"directory", "prefix"})
    d = _expect(o, "output", "directory", str)
    p = _expect(o, "output", "prefix", str)
    return Path(d), p


def _sidecar_payload(cfg: dict, command: str, seed: int, outputs: list[str]) -> dict:
    return {
        "command": command,
        "config": cfg,
        "effective_seed": seed,
        "outputs": outputs,
        "version": __version__,
    }


# ---------------------------------------------------------------------------
# theory commands


def _beta_grid(block: dict, name: str, alpha: float) -> list[float]:
    g = _expect(block, name, "beta_grid", dict)
    _check_keys(g, f"{name}.beta_grid", {"start", "stop", "count"})
    start = float(_expect(g, f"{name}.beta_grid", "start", (int, float)))
    stop = float(_expect(g, f"{name}.beta_grid", "stop", (int, float)))
    count = int(_expect(g, f"{name}.beta_grid", "count", int))
    if not (alpha < start <= stop <= 1.0) or count < 1:
        raise ConfigError(
            f"'{name}.beta_grid' must satisfy alpha < start <= stop <= 1, count >= 1"
        )
    return list(np.linspace(start, stop, count))


def cmd_theory(subtarget: str, cfg: dict, workers: int) -> int:
    out_dir, prefix = parse_output(cfg)
    if subtarget == "scales":
        params = parse_model(cfg)
        d = derive(params)
        rows = [
            ["sigma2", d.sigma2],
            ["gamma_finite", d.gamma_finite],
            ["gamma_star", d.gamma_star],
            ["d_star", d.d_star],
            ["large_radius", d.large_radius],
            ["small_rate_per_block", d.small_rate_per_block],
            ["large_rate_per_block", d.large_rate_per_block],
            ["timescale_alpha", d.timescale(params.alpha)],
            ["timescale_1", d.timescale(1.0)],
            ["equilibrium_scale", d.equilibrium_scale],
        ]
        path = out_dir / f"{prefix}_scales.csv"
        write_csv(path, ["name", "value"], rows)
        for name, value in rows:
            print(f"{name} = {value:.17g}")
        write_sidecar(
            out_dir / f"{prefix}_scales.meta.json",
            _sidecar_payload(cfg, "theory scales", 0, [path.name]),
        )
        return 0

    t = cfg.get("theory")
    if t is None:
        raise ConfigError("missing required section 'theory'")

    if subtarget == "ibd1":
        _check_keys(t, "theory", {"L", "alpha", "c_L", "theta", "beta_grid",
                                  "threshold"})
        L = float(_expect(t, "theory", "L", (int, float)))
        alpha = float(_expect(t, "theory", "alpha", (int, float)))
        c_L = float(_expect(t, "theory", "c_L", (int, float)))
        theta = float(_expect(t, "theory", "theta", (int, float)))
        threshold = float(
            _expect(t, "theory", "threshold", (int, float), required=False,
                    default=0.01)
        )
        betas = _beta_grid(t, "theory", alpha)
        rows = theory.ibd_single_curves(betas, theta, c_L, L, alpha)
        path = out_dir / f"{prefix}_ibd1.csv"
        write_csv(path, ["beta", "value_large", "value_small"], rows)
        b_lo = alpha + 1e-6
        v_large = theory.vanishing_point(
            lambda b: theory.decay_factor_large(b, theta, c_L, L), b_lo, 1.0, threshold
        )
        v_small = theory.vanishing_point(
            lambda b: theory.decay_factor_small(b, theta, L), b_lo, 1.0, threshold
        )
        payload = _sidecar_payload(cfg, "theory ibd1", 0, [path.name])
        payload["vanishing_point_large"] = v_large if v_large is not None else "none in range"
        payload["vanishing_point_small"] = v_small if v_small is not None else "none in range"
        write_sidecar(out_dir / f"{prefix}_ibd1.meta.json", payload)
        print(f"vanishing point with large events: {payload['vanishing_point_large']}")
        print(f"vanishing point small-only:        {payload['vanishing_point_small']}")
        return 0

    if subtarget == "ibd2":
        _check_keys(t, "theory", {"L", "alpha", "c_L", "theta1", "theta2",
                                  "gamma_mid", "r_small", "beta_grid"})
        L = float(_expect(t, "theory", "L", (int, float)))
        alpha = float(_expect(t, "theory", "alpha", (int, float)))
        c_L = float(_expect(t, "theory", "c_L", (int, float)))
        th1 = float(_expect(t, "theory", "theta1", (int, float)))
        th2 = float(_expect(t, "theory", "theta2", (int, float)))
        gmid = float(_expect(t, "theory", "gamma_mid", (int, float)))
        r_small = float(_expect(t, "theory", "r_small", (int, float)))
        from .params import gamma_star

        gstar = gamma_star(L, r_small)
        betas = _beta_grid(t, "theory", alpha)
        rows = theory.ibd_double_curves(betas, th1, th2, c_L, L, alpha, gmid, gstar)
        path = out_dir / f"{prefix}_ibd2.csv"
        write_csv(
            path,
            ["beta", "v_gamma_ge1", "v_gamma_mid", "v_gamma_le_alpha", "v_no_large"],
            rows,
        )
        payload = _sidecar_payload(cfg, "theory ibd2", 0, [path.name])
        payload["gamma_star"] = gstar
        payload["gamma_mid"] = gmid
        write_sidecar(out_dir / f"{prefix}_ibd2.meta.json", payload)
        print(f"gamma_star = {gstar:.6g}")
        return 0

    if subtarget == "survival":
        params = parse_model(cfg)
        est = parse_estimator(cfg, params)
        _check_keys(t, "theory", {"joint", "gamma"})
        joint = _expect(t, "theory", "joint", str, required=False, default="none")
        if joint not in ("none", "fast", "slow"):
            raise ConfigError("'theory.joint' must be 'none', 'fast' or 'slow'")
        beta = params.beta
        if beta is None:
            raise ConfigError("'model.beta' required for theory survival")
        d = derive(params)
        rows = []
        for tt in est.t_grid:
            rows.append([tt, d.timescale(tt),
                         theory.single_locus_survival_phase1(tt, params.alpha, beta)])
        for m in est.phase2_grid:
            s = m * d.equilibrium_scale
            expo = params.alpha + math.log(s / params.rho) / (2.0 * math.log(params.L))
            rows.append([expo, s,
                         theory.single_locus_survival_phase2(m, params.alpha, beta)])
        rows.sort(key=lambda r: r[1])
        outputs = []
        path = out_dir / f"{prefix}_theory_survival.csv"
        write_csv(path, ["t_exponent", "threshold_time", "survival"], rows)
        outputs.append(path.name)
        if joint != "none":
            gamma = _expect(t, "theory", "gamma", (int, float), required=joint == "slow")
            jrows = []
            for tt in est.t_grid:
                v = (
                    theory.joint_survival_fast(tt, params.alpha, beta)
                    if joint == "fast"
                    else theory.joint_survival_slow(tt, params.alpha, beta, gamma)
                )
                jrows.append([tt, d.timescale(tt), v])
            for m in est.phase2_grid:
                s = m * d.equilibrium_scale
                expo = params.alpha + math.log(s / params.rho) / (
                    2.0 * math.log(params.L)
                )
                v = (
                    theory.joint_survival_fast(m, params.alpha, beta, phase=2)
                    if joint == "fast"
                    else theory.joint_survival_slow(m, params.alpha, beta, gamma, phase=2)
                )
                jrows.append([expo, s, v])
            jrows.sort(key=lambda r: r[1])
            jpath = out_dir / f"{prefix}_theory_survival_joint.csv"
            write_csv(jpath, ["t_exponent", "threshold_time", "survival"], jrows)
            outputs.append(jpath.name)
        write_sidecar(
            out_dir / f"{prefix}_theory_survival.meta.json",
            _sidecar_payload(cfg, "theory survival", 0, outputs),
        )
        return 0

    raise ConfigError(f"unknown theory subtarget {subtarget!r}")


# ---------------------------------------------------------------------------
# sim commands


def _survival_csv(path: Path, curve: mc.SurvivalCurve) -> None:
    write_csv(path, mc.CSV_HEADER_SURVIVAL, curve.csv_rows())


def cmd_sim(subtarget: str, cfg: dict, workers: int) -> int:
    params = parse_model(cfg)
    est = parse_estimator(cfg, params)
    out_dir, prefix = parse_output(cfg)
    outputs: list[str] = []

    if subtarget == "pair":
        block = cfg.get("pair", {})
        _check_keys(block, "pair", {"ibd_thetas"})
        rec = mc.pair_records(params, est, workers)
        curves = mc.estimate_survival("single", params, est, records=rec)
        path = out_dir / f"{prefix}_pair_survival.csv"
        _survival_csv(path, curves["single"])
        outputs.append(path.name)
        rows = [
            [i, rec[i, 0] if rec[i, 0] >= 0 else est.horizon,
             rec[i, 1] if rec[i, 1] >= 0 else est.horizon,
             int(rec[i, 0] < 0), int(rec[i, 1] < 0)]
            for i in range(rec.shape[0])
        ]
        rpath = out_dir / f"{prefix}_pair_records.csv"
        write_csv(rpath, ["replicate", "tau", "T", "tau_censored", "T_censored"], rows)
        outputs.append(rpath.name)
        thetas = block.get("ibd_thetas")
        if thetas:
            ests = mc.estimate_ibd(params, est, [float(x) for x in thetas], records=rec)
            ipath = out_dir / f"{prefix}_pair_ibd.csv"
            write_csv(
                ipath,
                ["theta", "est_lo", "est_hi", "ci_lo", "ci_hi", "n", "censored"],
                [[e.theta, e.est_lo, e.est_hi, e.ci_lo, e.ci_hi, e.n, e.n_censored]
                 for e in ests],
            )
            outputs.append(ipath.name)

    elif subtarget == "two-locus":
        block = cfg.get("two_locus", {})
        _check_keys(block, "two_locus", {"ibd_theta1", "ibd_theta2"})
        rec = mc.two_locus_records(params, est, workers)
        for kind, name in (("joint-min", "joint"), ("per-locus", None)):
            curves = mc.estimate_survival(kind, params, est, records=rec)
            for cname, curve in curves.items():
                path = out_dir / f"{prefix}_twolocus_{cname}_survival.csv"
                _survival_csv(path, curve)
                outputs.append(path.name)
        eq = mc.estimate_equal_coalescence(params, est, records=rec)
        epath = out_dir / f"{prefix}_twolocus_equal.csv"
        write_csv(
            epath,
            ["probability", "ci_lo", "ci_hi", "n", "n_equal", "n_censored"],
            [[eq.probability, eq.ci_lo, eq.ci_hi, eq.n, eq.n_equal, eq.n_censored]],
        )
        outputs.append(epath.name)
        rows = [
            [i,
             rec[i, 0] if rec[i, 0] >= 0 else est.horizon,
             rec[i, 1] if rec[i, 1] >= 0 else est.horizon,
             rec[i, 2] if rec[i, 2] >= 0 else est.horizon,
             rec[i, 3] if rec[i, 3] >= 0 else est.horizon,
             int(rec[i, 0] < 0), int(rec[i, 1] < 0),
             int(rec[i, 4] >= 0 and rec[i, 4] == rec[i, 5])]
            for i in range(rec.shape[0])
        ]
        rpath = out_dir / f"{prefix}_twolocus_records.csv"
        write_csv(
            rpath,
            ["replicate", "tau_Aa", "tau_Bb", "T_Aa", "T_Bb",
             "tau_Aa_censored", "tau_Bb_censored", "equal_coalescence"],
            rows,
        )
        outputs.append(rpath.name)
        if "ibd_theta1" in block or "ibd_theta2" in block:
            th1 = float(_expect(block, "two_locus", "ibd_theta1", (int, float)))
            th2 = float(_expect(block, "two_locus", "ibd_theta2", (int, float)))
            joint, m1, m2 = mc.estimate_joint_ibd(params, est, th1, th2, records=rec)
            ipath = out_dir / f"{prefix}_twolocus_ibd.csv"
            write_csv(
                ipath,
                ["which", "theta", "est_lo", "est_hi", "ci_lo", "ci_hi", "n", "censored"],
                [["joint", joint.theta, joint.est_lo, joint.est_hi, joint.ci_lo,
                  joint.ci_hi, joint.n, joint.n_censored],
                 ["Aa", m1.theta, m1.est_lo, m1.est_hi, m1.ci_lo, m1.ci_hi, m1.n,
                  m1.n_censored],
                 ["Bb", m2.theta, m2.est_lo, m2.est_hi, m2.ci_lo, m2.ci_hi, m2.n,
                  m2.n_censored]],
            )
            outputs.append(ipath.name)

    elif subtarget == "recomb":
        block = cfg.get("recomb", {})
        _check_keys(block, "recomb", set())
        rec = mc.recombination_records(params, est, workers)
        rows = [
            [i, rec[i, 0] if rec[i, 0] >= 0 else est.horizon / params.rho,
             int(rec[i, 0] < 0)]
            for i in range(rec.shape[0])
        ]
        rpath = out_dir / f"{prefix}_recomb_records.csv"
        write_csv(rpath, ["replicate", "S_rescaled", "censored"], rows)
        outputs.append(rpath.name)

    elif subtarget == "kingman":
        block = cfg.get("kingman", {})
        _check_keys(block, "kingman", {"init", "diagonal", "spread"})
        init = block.get("init", "far")
        if init not in ("far", "square"):
            raise ConfigError("'kingman.init' must be 'far' or 'square'")
        diagonal = block.get("diagonal")
        spread = float(block.get("spread", 1.3))
        rec = mc.kingman_records(
            params, est, init,
            float(diagonal) if diagonal is not None else None,
            spread, workers,
        )
        dist = mc.estimate_pairing_distribution(
            params, est, init,
            float(diagonal) if diagonal is not None else None,
            records=rec,
        )
        ppath = out_dir / f"{prefix}_kingman_pairs.csv"
        write_csv(
            ppath,
            ["pair", "count", "frequency"],
            [[p, dist.counts[p], dist.frequencies[p]] for p in mc.PAIR_CODES],
        )
        outputs.append(ppath.name)
        trows = [["uniform", dist.chi2_uniform, 5, dist.chi2_uniform_pvalue]]
        for d, (stat, p, n_cells) in sorted(dist.class_tests.items()):
            trows.append([f"class_dist_{d:g}", stat, n_cells - 1, p])
        tpath = out_dir / f"{prefix}_kingman_tests.csv"
        write_csv(tpath, ["test", "statistic", "dof", "pvalue"], trows)
        outputs.append(tpath.name)

    elif subtarget == "decorr":
        block = cfg.get("decorr")
        if block is None:
            raise ConfigError("missing required section 'decorr'")
        _check_keys(block, "decorr", {"t_snapshot"})
        t_snap = float(_expect(block, "decorr", "t_snapshot", (int, float)))
        rec = mc.snapshot_records(params, est, t_snap, workers)
        rows = [[i, rec[i, 0]] for i in range(rec.shape[0])]
        rpath = out_dir / f"{prefix}_decorr_records.csv"
        write_csv(rpath, ["replicate", "separation_rescaled"], rows)
        outputs.append(rpath.name)

    else:
        raise ConfigError(f"unknown sim subtarget {subtarget!r}")

    write_sidecar(
        out_dir / f"{prefix}_{subtarget.replace('-', '')}.meta.json",
        _sidecar_payload(cfg, f"sim {subtarget}", est.seed, outputs),
    )
    return 0


# ---------------------------------------------------------------------------
# validate command: built-in oracle suite with fixed seeds


def _oracle_lines() -> list[tuple[str, float, float, float]]:
    """(name, measured, expected, relative tolerance) for each oracle."""
    out = []
    rng = np.random.Generator(np.random.Philox(key=2024))
    # lens area vs Monte Carlo in the bounding box [-R, R+d] x [-R, R]
    R, d, n_pts = 1.0, 1.0, 2 * 10**6
    x = rng.uniform(-R, R + d, n_pts)
    y = rng.uniform(-R, R, n_pts)
    inside = (x * x + y * y <= R * R) & ((x - d) ** 2 + y * y <= R * R)
    box = (2 * R + d) * (2 * R)
    out.append(("lens_area(1,1) Monte Carlo", box * inside.mean(), lens_area(R, d), 0.01))

    base = ModelParams(
        L=256.0, alpha=0.5, R_s=1.0, R_B=1.0, u_s=0.3, u_B=0.3, rho=math.inf, r=0.1
    )
    kp = K.kernel_params(base)
    jmax = K.max_parents(kp)
    horizon = 2.0 * 10**4
    rng = np.random.Generator(np.random.Philox(key=2025))
    n_s, n_l, sdx2, sdy2, _ = K.run_single_motion(horizon, kp, jmax, rng)
    out.append(
        ("single-lineage jump rate", n_s / horizon, base.u_s * math.pi * base.R_s**2, 0.02)
    )
    out.append(
        (
            "displacement variance rate",
            0.5 * (sdx2 + sdy2) / horizon,
            single_lineage_variance_rate(base),
            0.03,
        )
    )

    rng = np.random.Generator(np.random.Philox(key=2026))
    n_draws = 10**5
    rr = np.sqrt(rng.random(n_draws))  # radial law of a uniform unit-disc draw
    out.append(("uniform-ball mean distance", float(rr.mean()), 2.0 / 3.0, 0.01))
    out.append(("uniform-ball P(dist < R/2)", float((rr < 0.5).mean()), 0.25, 0.02))

    rng = np.random.Generator(np.random.Philox(key=2027))
    fx = np.array([100.0, 101.0])
    fy = np.array([100.0, 100.0])
    n_s, _ = K.count_accepted(fx, fy, horizon, kp, rng)
    out.append(
        (
            "two-mark union event rate",
            n_s / horizon,
            2.0 * math.pi - lens_area(1.0, 1.0),
            0.02,
        )
    )
    return out


def cmd_validate() -> int:
    ok = True
    for name, measured, expected, tol in _oracle_lines():
        rel = abs(measured - expected) / abs(expected)
        status = "PASS" if rel <= tol else "FAIL"
        if status == "FAIL":
            ok = False
        print(
            f"[{status}] {name}: measured={measured:.6g} expected={expected:.6g} "
            f"(rel err {rel:.3%}, tol {tol:.0%})"
        )
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="slfv",
        description="Genealogy simulation and coalescence-time analytics for a "
        "two-scale spatial population model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory", help="closed-form curves and scales")
    p_theory.add_argument(
        "subtarget", choices=["ibd1", "ibd2", "survival", "scales"]
    )
    p_theory.add_argument("--config", required=True)

    p_sim = sub.add_parser("sim", help="Monte Carlo estimation")
    p_sim.add_argument(
        "subtarget", choices=["pair", "two-locus", "recomb", "kingman", "decorr"]
    )
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--workers", type=int, default=1)

    sub.add_parser("validate", help="run the built-in oracle suite")

    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate()
        cfg = load_config(args.config)
        if args.command == "theory":
            return cmd_theory(args.subtarget, cfg, 1)
        return cmd_sim(args.subtarget, cfg, max(1, args.workers))
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (theory.NumericalError, FloatingPointError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        # domain errors raised on user-supplied values (grid/horizon/exponents)
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
