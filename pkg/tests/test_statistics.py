"""Counting moments, probability inversion, and pair correlations."""

import logging
import math

import numpy as np
import pytest

import photonforge as pf

import oracles

PI = math.pi
RNG = np.random.default_rng(425)


def pulsed_run(dt=0.05, t_end=12.0):
    params = pf.MirrorQubitParams(gamma=0.5)
    drive = pf.DriveSchedule.square_pi_pulse(5.0, 0.0, 1.0)
    return pf.simulate(params, drive, pf.PhaseSchedule.constant(0.0), t_end,
                       dt=dt)


def cascade_run(alpha_d=5.0, t_end=8.0, dt=0.01):
    params = pf.MirrorQubitParams(levels=3)
    tw = pf.pi_pulse_width(alpha_d, 2.0 * params.gamma02)
    drive = pf.DriveSchedule(((0.0, tw, alpha_d),))
    return pf.simulate(params, drive, pf.PhaseSchedule.constant(0.0), t_end,
                       dt=dt)


class TestMomentsAgainstNestedQuadrature:
    def test_first_two_moments(self):
        run = pulsed_run()
        got = pf.photon_mtiples(run, cutoff=2)
        want = oracles.naive_counting_moments(run.times, run.steps,
                                              run.counting_ops, run.states,
                                              mmax=2)
        assert abs(got[0] - want[0]) < 1e-10
        assert abs(got[1] - want[1]) < 1e-10

    def test_third_moment_on_short_window(self):
        params = pf.MirrorQubitParams(gamma=1.0)
        drive = pf.DriveSchedule(((0.0, 4.0, 1.2),))
        run = pf.simulate(params, drive, pf.PhaseSchedule.constant(0.0), 4.0,
                          dt=0.05)
        got = pf.photon_mtiples(run, cutoff=3)
        want = oracles.naive_counting_moments(run.times, run.steps,
                                              run.counting_ops, run.states,
                                              mmax=3)
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-10

    def test_cutoff_bounds(self):
        run = pulsed_run(t_end=2.0)
        with pytest.raises(ValueError, match="at least 1"):
            pf.photon_mtiples(run, cutoff=0)
        with pytest.raises(NotImplementedError, match="order 3"):
            pf.photon_mtiples(run, cutoff=4)

    def test_coarse_pulse_warns(self):
        params = pf.MirrorQubitParams(gamma=1.0)
        drive = pf.DriveSchedule.square_pi_pulse(5.0, 0.0, 2.0)
        run = pf.simulate(params, drive, pf.PhaseSchedule.constant(0.0), 2.0,
                          dt=0.1, min_pulse_steps=1)
        with pytest.warns(UserWarning, match="fewer than 20"):
            pf.photon_mtiples(run, cutoff=1)

    def test_window_must_sit_on_grid(self):
        run = pulsed_run(t_end=2.0)
        with pytest.raises(ValueError, match="does not lie on the simulation grid"):
            pf.photon_mtiples(run, window=(0.503, 2.0))

    def test_empty_window_rejected(self):
        run = pulsed_run(t_end=2.0)
        with pytest.raises(ValueError, match="empty counting window"):
            pf.photon_mtiples(run, window=(2.0, 2.0))

    def test_windowed_moments_equal_fresh_run(self):
        params = pf.MirrorQubitParams(gamma=0.5)
        tw = pf.pi_pulse_width(5.0, 1.0)
        drive = pf.DriveSchedule.square_pi_pulse(5.0, 0.0, 1.0)
        phase = pf.PhaseSchedule.constant(0.0)
        full = pf.simulate(params, drive, phase, 10.0, dt=0.005)
        idx = int(np.argmin(np.abs(full.times - tw)))
        rho_mid = full.states[idx].reshape((2, 2), order="F")
        fresh = pf.simulate(params, drive, phase, 10.0, t_start=tw,
                            rho0=rho_mid, dt=0.005)
        windowed = pf.photon_mtiples(full, cutoff=3, window=(tw, 10.0))
        direct = pf.photon_mtiples(fresh, cutoff=3)
        for a, b in zip(windowed, direct):
            assert abs(a - b) < 1e-12


class TestInversion:
    def test_binomial_roundtrip(self):
        for size in range(4, 10):
            p = RNG.uniform(0.05, 1.0, size=size)
            p /= p.sum()
            moments = oracles.forward_binomial_moments(p, size - 1)
            back = pf.invert_to_probabilities(moments)
            assert max(abs(a - b) for a, b in zip(back, p)) < 1e-12

    def test_poisson_reference(self):
        moments = oracles.poisson_moments(0.2, 8)
        p = pf.invert_to_probabilities(moments)
        assert abs(p[0] - math.exp(-0.2)) < 1e-9
        assert abs(p[1] - 0.2 * math.exp(-0.2)) < 1e-8
        assert abs(sum(p) - 1.0) < 1e-9

    def test_small_negative_probability_clamped(self, caplog):
        with caplog.at_level(logging.WARNING, logger="photonforge.statistics"):
            p = pf.invert_to_probabilities([0.8, -5e-4, 0.0])
        assert "clamping" in caplog.text
        assert min(p) >= 0.0
        assert abs(sum(p) - 1.0) < 1e-12

    def test_large_negative_probability_rejected(self):
        with pytest.raises(ValueError, match="below -1e-3"):
            pf.invert_to_probabilities([0.8, -5e-3, 0.0])

    def test_cutoff_argument_validated(self):
        with pytest.raises(ValueError, match="incompatible"):
            pf.invert_to_probabilities([0.5], cutoff=2)

    def test_statistics_container(self):
        run = pulsed_run(t_end=6.0)
        stats = pf.counting_statistics(run, cutoff=2)
        assert stats.cutoff == 2
        assert len(stats.n_tiples) == 2
        assert len(stats.probabilities) == 3
        assert stats.prob(1) == stats.probabilities[1]
        assert abs(sum(stats.probabilities) - 1.0) < 1e-9
        assert abs(stats.window[0] - 0.0) < 1e-9
        assert abs(stats.window[1] - 6.0) < 1e-9


class TestSingleStoredExcitation:
    def test_higher_moments_vanish(self, stored_excitation_run):
        nm = pf.photon_mtiples(stored_excitation_run, cutoff=3)
        assert nm[0] == pytest.approx(1.0 - math.exp(-12.0), abs=1e-4)
        assert abs(nm[1]) < 1e-15
        assert abs(nm[2]) < 1e-15

    def test_pair_correlator_vanishes(self, stored_excitation_run):
        run = stored_excitation_run
        assert pf.correlator_gm(run, (1.0, 3.0)) < 1e-12
        assert pf.correlator_gm(run, (0.5, 0.5)) < 1e-12

    def test_single_time_correlator_is_the_flux(self, stored_excitation_run):
        run = stored_excitation_run
        idx = int(np.argmin(np.abs(run.times - 2.0)))
        got = pf.correlator_gm(run, (2.0,))
        assert abs(got - math.exp(-run.times[idx])) < 1e-9

    def test_times_must_be_ordered(self, stored_excitation_run):
        with pytest.raises(ValueError, match="nondecreasing"):
            pf.correlator_gm(stored_excitation_run, (3.0, 1.0))

    def test_time_off_grid_rejected(self, stored_excitation_run):
        with pytest.raises(ValueError, match="outside the simulation grid"):
            pf.correlator_gm(stored_excitation_run, (100.0,))


@pytest.fixture(scope="module")
def run3():
    return cascade_run()


class TestPairIntegrals:
    def test_symmetrized_sum_of_orderings(self, run3):
        a_si = pf.ordered_pair_count(run3, "signal", "idler")
        a_is = pf.ordered_pair_count(run3, "idler", "signal")
        g = pf.cross_pair_integral(run3, "signal", "idler")
        assert abs(g - (a_si + a_is)) < 1e-12
        assert abs(pf.cross_pair_integral(run3, "idler", "signal") - g) < 1e-15

    def test_same_channel_counts_both_orderings(self, run3):
        a_ii = pf.ordered_pair_count(run3, "idler", "idler")
        assert abs(pf.cross_pair_integral(run3, "idler", "idler") - 2.0 * a_ii) < 1e-15

    def test_channel_aliases(self, run3):
        a = pf.ordered_pair_count(run3, "signal", "idler")
        b = pf.ordered_pair_count(run3, "01", "12")
        c = pf.ordered_pair_count(run3, "s", "i")
        assert a == b == c

    def test_unknown_channel_rejected(self, run3):
        with pytest.raises(ValueError, match="unknown channel"):
            pf.ordered_pair_count(run3, "signal", "telegraph")

    def test_two_level_run_rejected(self, stored_excitation_run):
        with pytest.raises(ValueError, match="three-level"):
            pf.ordered_pair_count(stored_excitation_run, "signal", "idler")

    def test_metric_formula(self):
        assert pf.csi_metric(0.1, 0.2, 0.5) == pytest.approx(0.25 - 0.02, abs=1e-15)

    def test_pair_result_validation(self):
        with pytest.raises(ValueError, match="negative"):
            pf.CrossPairResult(g_ii=-1e-3, g_ss=0.1, g_is=0.1, v=0.0)
        with pytest.raises(ValueError, match="exceeds"):
            pf.CrossPairResult(g_ii=0.1, g_ss=0.1, g_is=2.0, v=1.5)
