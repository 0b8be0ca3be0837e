"""End-to-end estimation runs: determinism, invariants, plan selection."""

import math

import numpy as np
import pytest

from rfe.bounds import BoundsUnachievable
from rfe.estimator import (
    RunConfig,
    estimate_phase,
    run_rfe,
    spectrum_csv,
    trial_to_dict,
    winning_frequency,
)
from rfe.noise import AdversaryStrategy, Ban, Gaussian, HighCoherence, Ideal

TWO_PI = 2.0 * math.pi


class TestRunConfigValidation:
    def test_rejects_bad_fields(self):
        with pytest.raises(ValueError):
            RunConfig(samples=0, grid_size=8, theta=1.0)
        with pytest.raises(ValueError):
            RunConfig(samples=10, grid_size=0, theta=1.0)
        with pytest.raises(ValueError):
            RunConfig(samples=10, grid_size=8, theta=-0.5)
        with pytest.raises(ValueError):
            RunConfig(samples=10, grid_size=8, theta=1.0, seed=-1)
        with pytest.raises(ValueError):
            RunConfig(samples=10, grid_size=8, theta=1.0, seed=2 ** 64)


class TestDeterminism:
    @pytest.mark.parametrize("noise", [Ideal(), Gaussian(0.3),
                                       Ban(0.05, AdversaryStrategy.SIGN_FLIP)])
    def test_equal_config_equal_result(self, noise):
        config = RunConfig(samples=2000, grid_size=31, theta=1.7, noise=noise, seed=99)
        a = run_rfe(config)
        b = run_rfe(config)
        assert a.theta_hat == b.theta_hat
        assert a.winning_index == b.winning_index
        assert np.array_equal(a.spectrum.coefficients, b.spectrum.coefficients)
        assert a.spectrum.total_depth == b.spectrum.total_depth
        assert a.spectrum.clamp_count == b.spectrum.clamp_count

    def test_different_seeds_differ(self):
        base = dict(samples=2000, grid_size=31, theta=1.7, noise=Gaussian(0.3))
        a = run_rfe(RunConfig(seed=1, **base))
        b = run_rfe(RunConfig(seed=2, **base))
        assert not np.array_equal(a.spectrum.coefficients, b.spectrum.coefficients)


class TestOnGridRuns:
    def test_large_sample_peak(self):
        result = run_rfe(RunConfig(samples=10 ** 5, grid_size=8,
                                   theta=TWO_PI * 3 / 8, seed=1))
        assert result.winning_index == 3
        assert result.theta_hat == pytest.approx(3 * math.pi / 4, abs=1e-15)

    def test_on_grid_succeeds_over_100_seeds(self):
        hits = 0
        for seed in range(100):
            result = run_rfe(RunConfig(samples=10 ** 5, grid_size=8,
                                       theta=TWO_PI * 3 / 8, seed=seed))
            hits += result.winning_index == 3
        assert hits == 100

    def test_constant_signal(self):
        result = run_rfe(RunConfig(samples=10 ** 4, grid_size=8, theta=0.0, seed=5))
        assert result.winning_index == 0
        assert result.theta_hat == 0.0


class TestResultInvariants:
    def test_theta_hat_matches_index(self):
        for seed in range(10):
            result = run_rfe(RunConfig(samples=50, grid_size=13, theta=2.0, seed=seed))
            assert 0 <= result.winning_index < 13
            assert result.theta_hat == TWO_PI * result.winning_index / 13

    def test_magnitudes_bounded_by_sqrt2(self):
        result = run_rfe(RunConfig(samples=400, grid_size=17, theta=0.9, seed=3))
        assert np.max(np.abs(result.spectrum.coefficients)) <= math.sqrt(2) + 1e-9

    def test_depth_range_and_counts(self):
        M, K = 3000, 21
        result = run_rfe(RunConfig(samples=M, grid_size=K, theta=1.0, seed=4))
        assert 0 <= result.spectrum.total_depth <= M * (K - 1)
        assert result.spectrum.samples_used == M
        assert result.spectrum.clamp_count == 0  # ideal model never clamps

    def test_mean_depth_over_runs(self):
        # mean of total_depth / M approaches (K-1)/2 within 2%
        M, K = 2000, 63
        means = [run_rfe(RunConfig(samples=M, grid_size=K, theta=1.3,
                                   seed=s)).spectrum.total_depth / M
                 for s in range(50)]
        assert np.mean(means) == pytest.approx((K - 1) / 2, rel=0.02)

    def test_clamp_counting_under_overdriven_noise(self):
        # k/T2 beyond 2 pushes the +1 probability past 1 for most times
        result = run_rfe(RunConfig(samples=500, grid_size=16, theta=1.0,
                                   noise=HighCoherence(4.0), seed=6))
        assert result.spectrum.clamp_count > 0


class TestWinningFrequency:
    def test_plain_argmax(self):
        assert winning_frequency(np.array([0.1, 0.9, 0.5])) == 1

    def test_tie_breaks_to_smallest_index(self):
        assert winning_frequency(np.array([0.7, 0.7, 0.7])) == 0
        assert winning_frequency(np.array([0.1, 0.7, 0.7])) == 1
        assert winning_frequency(np.array([1 + 1j, 1 - 1j, -1 - 1j])) == 0


class TestEstimatePhase:
    def test_trivial_wide_target(self):
        result = estimate_phase(2.0, 0.1, Ideal(), theta=1.0, seed=0)
        assert result.theta_hat == math.pi / 2
        assert result.spectrum.samples_used == 0
        assert result.spectrum.total_depth == 0
        assert result.winning_index == 1
        assert result.theta_hat == TWO_PI * result.winning_index / len(
            result.spectrum.coefficients)

    def test_certified_plan_is_used(self):
        result = estimate_phase(0.1, 0.1, Ideal(), theta=1.3, seed=11)
        assert result.spectrum.samples_used == 3130
        assert len(result.spectrum.coefficients) == 63

    def test_threshold_violation_raises(self):
        with pytest.raises(BoundsUnachievable):
            estimate_phase(0.1, 0.1, Ban(0.15), theta=1.0, seed=0)

    def test_accuracy_at_certified_count(self):
        result = estimate_phase(0.1, 0.1, Ideal(), theta=1.3, seed=11)
        assert abs(result.theta_hat - 1.3) <= 0.1


class TestSerialization:
    def test_trial_dict_shape(self):
        result = run_rfe(RunConfig(samples=100, grid_size=9, theta=0.4, seed=2))
        data = trial_to_dict(result)
        assert set(data) == {"theta_hat", "winning_index", "spectrum"}
        assert len(data["spectrum"]["coefficients"]) == 9
        assert data["spectrum"]["samples_used"] == 100

    def test_spectrum_csv_layout(self):
        result = run_rfe(RunConfig(samples=100, grid_size=9, theta=0.4, seed=2))
        text = spectrum_csv(result.spectrum.coefficients)
        lines = text.splitlines()
        assert lines[0] == "j,re,im,abs"
        assert len(lines) == 10
        j, re, im, mag = lines[3].split(",")
        value = complex(float(re), float(im))
        assert j == "2"
        assert abs(value) == pytest.approx(float(mag), rel=1e-12)
        assert text.endswith("\n")
