import math

import numpy as np
import pytest

from slfv import _kernels as K
from slfv.events import next_event, sample_num_parents
from slfv.geometry import TorusPoint, ball_covers, distance
from slfv.params import ModelParams

from conftest import rng


class TestSampleNumParents:
    def test_point_masses(self):
        g = rng(20)
        assert all(sample_num_parents({1: 1.0}, g) == 1 for _ in range(50))
        assert all(sample_num_parents({2: 1.0}, g) == 2 for _ in range(50))

    def test_balanced_frequencies(self):
        g = rng(21)
        draws = np.array(
            [sample_num_parents({1: 0.5, 2: 0.5}, g) for _ in range(10**5)]
        )
        assert (draws == 1).mean() == pytest.approx(0.5, abs=0.01)

    def test_support_respected(self):
        g = rng(22)
        draws = {sample_num_parents({2: 0.3, 5: 0.7}, g) for _ in range(500)}
        assert draws == {2, 5}


class TestNextEvent:
    def test_empty_marks_rejected(self, desk_params):
        with pytest.raises(ValueError):
            next_event([], desk_params, rng(23))

    def test_event_fields_consistent(self, desk_params):
        g = rng(24)
        marks = [TorusPoint(10.0, 10.0), TorusPoint(30.0, 10.0)]
        for _ in range(200):
            ev = next_event(marks, desk_params, g)
            assert ev.dt > 0
            if ev.kind == "small":
                assert ev.radius == desk_params.R_s
                assert ev.impact == desk_params.u_s
                assert ev.num_parents == 2
            else:
                assert ev.radius == desk_params.large_radius
                assert ev.impact == desk_params.u_B
            assert len(ev.parent_positions) == ev.num_parents
            for p in ev.parent_positions:
                assert distance(p, ev.center, desk_params.L) <= ev.radius * (1 + 1e-9)
            # the ball covers at least one mark
            assert any(
                ball_covers(ev.center, ev.radius * (1 + 1e-9), m, desk_params.L)
                for m in marks
            )

    def test_determinism(self, desk_params):
        marks = [TorusPoint(10.0, 10.0), TorusPoint(11.0, 10.0)]
        seq1 = [next_event(marks, desk_params, rng(25)) for _ in range(1)]
        g1, g2 = rng(26), rng(26)
        s1 = [next_event(marks, desk_params, g1) for _ in range(20)]
        s2 = [next_event(marks, desk_params, g2) for _ in range(20)]
        assert s1 == s2

    def test_single_mark_rate(self, desk_params):
        # one mark: every candidate accepted; small rate = pi R_s^2
        g = rng(27)
        marks = [TorusPoint(50.0, 50.0)]
        horizon = 5000.0
        t, n_small = 0.0, 0
        while True:
            ev = next_event(marks, desk_params, g)
            t += ev.dt
            if t > horizon:
                break
            if ev.kind == "small":
                n_small += 1
        assert n_small / horizon == pytest.approx(math.pi, rel=0.02)

    def test_two_mark_union_rate(self, desk_params):
        # marks at distance 1: union area 2 pi - lens(1,1)
        from slfv.geometry import lens_area

        g = rng(28)
        marks = [TorusPoint(50.0, 50.0), TorusPoint(51.0, 50.0)]
        horizon = 5000.0
        t, n_small = 0.0, 0
        while True:
            ev = next_event(marks, desk_params, g)
            t += ev.dt
            if t > horizon:
                break
            if ev.kind == "small":
                n_small += 1
        expected = 2.0 * math.pi - lens_area(1.0, 1.0)
        assert n_small / horizon == pytest.approx(expected, rel=0.02)

    def test_no_event_covers_distant_marks(self, desk_params):
        # distance beyond twice the large radius: one ball cannot cover both
        g = rng(29)
        gap = 2.0 * desk_params.large_radius + 1.0
        marks = [TorusPoint(10.0, 10.0), TorusPoint(10.0 + gap, 10.0)]
        for _ in range(2000):
            ev = next_event(marks, desk_params, g)
            covered = [
                ball_covers(ev.center, ev.radius * (1 + 1e-9), m, desk_params.L)
                for m in marks
            ]
            assert sum(covered) == 1

    def test_superposition_ratio(self, desk_params):
        # accepted large/small ratio for one mark = (R_B^2/rho)/R_s^2
        kp = K.kernel_params(desk_params)
        g = rng(30)
        fx = np.array([50.0])
        fy = np.array([50.0])
        n_s, n_l = K.count_accepted(fx, fy, 3 * 10**5, kp, g)
        expected = (desk_params.R_B**2 / desk_params.rho) / desk_params.R_s**2
        assert n_l / n_s == pytest.approx(expected, rel=0.05)
