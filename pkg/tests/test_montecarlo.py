import math

import numpy as np
import pytest

from slfv import montecarlo as mc
from slfv.observables import default_horizon
from slfv.params import ModelParams, derive

from conftest import rng


class TestEstimatorConfig:
    def test_grid_must_be_sorted(self):
        with pytest.raises(ValueError):
            mc.EstimatorConfig(replicates=10, seed=1, horizon=10.0, t_grid=(0.9, 0.8))

    def test_replicates_positive(self):
        with pytest.raises(ValueError):
            mc.EstimatorConfig(replicates=0, seed=1, horizon=10.0)

    def test_thresholds_sorted_with_effective_exponent(self, small_params):
        cfg = mc.EstimatorConfig(
            replicates=10, seed=1, horizon=1e9, t_grid=(0.8, 1.0), phase2_grid=(1.0,)
        )
        thr = cfg.thresholds(small_params)
        times = [s for _, s in thr]
        assert times == sorted(times)
        d = derive(small_params)
        for expo, s in thr:
            assert s == pytest.approx(d.timescale(expo), rel=1e-12)


class TestWilson:
    def test_contains_point_estimate(self):
        lo, hi = mc.wilson_interval(30, 100, 0.95)
        assert lo < 0.3 < hi
        assert 0.0 <= lo and hi <= 1.0

    def test_coverage_sanity(self):
        # ~95% of intervals over synthetic Bernoulli data contain the truth
        g = rng(80)
        p_true, n, reps = 0.3, 200, 400
        hits = 0
        for _ in range(reps):
            k = int(g.binomial(n, p_true))
            lo, hi = mc.wilson_interval(k, n, 0.95)
            hits += lo <= p_true <= hi
        assert 0.90 <= hits / reps <= 0.99

    def test_degenerate_counts(self):
        lo, hi = mc.wilson_interval(0, 50, 0.95)
        assert lo == 0.0 and hi < 0.2
        lo, hi = mc.wilson_interval(50, 50, 0.95)
        assert hi == 1.0 and lo > 0.8


class TestSurvivalEstimation:
    def test_trivial_thresholds(self):
        times = np.array([5.0, 7.0, 9.0])
        cens = np.array([False, False, False])
        curve = mc.survival_curve_from_times(
            "x", times, cens, 100.0, [(0.0, 0.0), (1.0, 50.0)], 0.95
        )
        assert curve.points[0].survival == 1.0
        assert curve.points[1].survival == 0.0

    def test_monotone_along_grid(self, small_params):
        cfg = mc.EstimatorConfig(
            replicates=200, seed=81, horizon=default_horizon(small_params),
            t_grid=(0.8, 0.9, 1.0), phase2_grid=(1.0, 2.0),
        )
        curve = mc.estimate_survival("single", small_params, cfg)["single"]
        surv = [p.survival for p in curve.points]
        assert all(a >= b for a, b in zip(surv, surv[1:]))

    def test_horizon_must_cover_grid(self, small_params):
        cfg = mc.EstimatorConfig(
            replicates=5, seed=82, horizon=1.0, t_grid=(1.0,)
        )
        with pytest.raises(ValueError, match="horizon"):
            mc.estimate_survival("single", small_params, cfg)

    def test_reproducible_across_worker_counts(self, small_params):
        cfg = mc.EstimatorConfig(replicates=60, seed=83, horizon=default_horizon(small_params))
        r1 = mc.pair_records(small_params, cfg, workers=1)
        r3 = mc.pair_records(small_params, cfg, workers=3)
        assert np.array_equal(r1, r3)
        t1 = mc.two_locus_records(small_params, cfg, workers=1)
        t3 = mc.two_locus_records(small_params, cfg, workers=3)
        assert np.array_equal(t1, t3)

    def test_per_locus_and_joint_consistency(self, small_params):
        cfg = mc.EstimatorConfig(
            replicates=300, seed=84, horizon=default_horizon(small_params),
            t_grid=(0.9,),
        )
        rec = mc.two_locus_records(small_params, cfg)
        per = mc.estimate_survival("per-locus", small_params, cfg, records=rec)
        joint = mc.estimate_survival("joint-min", small_params, cfg, records=rec)
        # min of the two times survives no more than either marginal
        jm = joint["joint_min"].points[0].survival
        assert jm <= per["Aa"].points[0].survival + 1e-12
        assert jm <= per["Bb"].points[0].survival + 1e-12


class TestEqualCoalescence:
    def test_r_zero_gives_probability_one(self, small_params):
        p = ModelParams(**{**small_params.__dict__, "r": 0.0})
        cfg = mc.EstimatorConfig(replicates=100, seed=85, horizon=default_horizon(p))
        eq = mc.estimate_equal_coalescence(p, cfg)
        assert eq.probability == 1.0 and eq.n_equal == 100

    def test_monotone_nonincreasing_in_r(self, small_params):
        hz = default_horizon(small_params)
        probs = []
        for r in (0.0, 0.02, 0.5):
            p = ModelParams(**{**small_params.__dict__, "r": r})
            cfg = mc.EstimatorConfig(replicates=400, seed=86, horizon=hz)
            probs.append(mc.estimate_equal_coalescence(p, cfg, workers=2).probability)
        assert probs[0] >= probs[1] >= probs[2]
        assert probs[0] == 1.0


class TestIbd:
    def test_theta_zero_is_one(self, small_params):
        cfg = mc.EstimatorConfig(replicates=50, seed=87, horizon=default_horizon(small_params))
        rec = mc.pair_records(small_params, cfg)
        est = mc.estimate_ibd(small_params, cfg, [0.0], records=rec)[0]
        if est.n_censored == 0:
            assert est.est_lo == pytest.approx(1.0) and est.est_hi == pytest.approx(1.0)

    def test_large_theta_vanishes(self, small_params):
        cfg = mc.EstimatorConfig(replicates=50, seed=88, horizon=default_horizon(small_params))
        est = mc.estimate_ibd(small_params, cfg, [1e6])[0]
        assert est.est_hi < 1e-6

    def test_censored_bracket(self, small_params):
        cfg = mc.EstimatorConfig(replicates=30, seed=89, horizon=1e-3)
        theta = 1.0
        est = mc.estimate_ibd(small_params, cfg, [theta])[0]
        assert est.n_censored == 30
        assert est.est_lo == 0.0
        assert est.est_hi == pytest.approx(math.exp(-2.0 * theta * 1e-3))

    def test_joint_vs_product_fast_regime(self, small_params):
        # r = 0.5 decorrelates the loci: joint ~ product within the CIs
        p = ModelParams(**{**small_params.__dict__, "r": 0.5})
        cfg = mc.EstimatorConfig(replicates=2000, seed=90, horizon=default_horizon(p))
        theta = 1.0 / derive(p).timescale(1.0)
        joint, m1, m2 = mc.estimate_joint_ibd(p, cfg, theta, theta, workers=2)
        prod = 0.5 * (m1.est_lo + m1.est_hi) * 0.5 * (m2.est_lo + m2.est_hi)
        mid = 0.5 * (joint.est_lo + joint.est_hi)
        margin = (joint.ci_hi - joint.ci_lo) + (m1.ci_hi - m1.ci_lo) + (m2.ci_hi - m2.ci_lo)
        assert abs(mid - prod) <= margin


class TestPairingDistribution:
    def test_bookkeeping_totals(self, small_params):
        cfg = mc.EstimatorConfig(replicates=150, seed=91, horizon=default_horizon(small_params))
        dist = mc.estimate_pairing_distribution(small_params, cfg, init="square")
        assert sum(dist.counts.values()) + dist.n_multi + dist.n_censored == 150
        assert dist.n == 150

    def test_square_class_tests_present(self, small_params):
        cfg = mc.EstimatorConfig(replicates=150, seed=92, horizon=default_horizon(small_params))
        dist = mc.estimate_pairing_distribution(small_params, cfg, init="square")
        assert len(dist.class_tests) == 2  # sides and diagonals

    def test_far_marks_respect_window(self, small_params):
        g = rng(93)
        target = small_params.L**0.8
        pts = mc._far_marks(small_params.L, target, 1.3, g)
        for i in range(4):
            for j in range(i + 1, 4):
                d = mc._torus_dist(pts[i], pts[j], small_params.L)
                assert target / 1.3 <= d <= target * 1.3

    def test_square_marks_geometry(self):
        pts = mc.square_marks(256.0, 100.0)
        d01 = mc._torus_dist(pts[0], pts[1], 256.0)
        d02 = mc._torus_dist(pts[0], pts[2], 256.0)
        assert d02 == pytest.approx(100.0)
        assert d01 == pytest.approx(100.0 / math.sqrt(2.0))


class TestReplicateRng:
    def test_streams_differ_and_reproduce(self):
        a1 = mc.replicate_rng(5, 0).random(4)
        a2 = mc.replicate_rng(5, 0).random(4)
        b = mc.replicate_rng(5, 1).random(4)
        c = mc.replicate_rng(6, 0).random(4)
        assert np.array_equal(a1, a2)
        assert not np.array_equal(a1, b)
        assert not np.array_equal(a1, c)
