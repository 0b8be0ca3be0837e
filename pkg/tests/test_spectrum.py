"""Kernel and closed-form spectrum checks against brute-force oracles."""

import math

import numpy as np
import pytest

from rfe.spectrum import (
    CLOSE_MAGNITUDE_MIN,
    NON_ADJACENT_ENVELOPE_MAX,
    NON_ADJACENT_MAGNITUDE_MAX,
    FrequencyClass,
    circular_distance,
    classify_frequency,
    dirichlet_kernel,
    expected_coefficient,
    expected_spectrum,
    validate_phase,
)

TWO_PI = 2.0 * math.pi


def direct_sum_coefficient(theta, j, K):
    """Independent oracle: the defining K-term average, summed literally."""
    k = np.arange(K)
    return np.mean(np.exp(1j * k * theta) * np.exp(-2j * np.pi * j * k / K))


class TestDirichletKernel:
    def test_limit_at_zero(self):
        assert dirichlet_kernel(0.0, 8) == 1.0

    def test_integer_zeros(self):
        assert abs(dirichlet_kernel(1.0, 8)) < 1e-15
        assert abs(dirichlet_kernel(3.0, 8)) < 1e-15
        assert abs(dirichlet_kernel(-5.0, 8)) < 1e-15

    def test_limits_at_multiples_of_k(self):
        # (-1)^(m (K-1)): odd K-1 alternates, even K-1 stays at +1
        assert dirichlet_kernel(8.0, 8) == -1.0
        assert dirichlet_kernel(16.0, 8) == 1.0
        assert dirichlet_kernel(-8.0, 8) == -1.0
        assert dirichlet_kernel(9.0, 9) == 1.0

    def test_large_k_asymptote(self):
        value = dirichlet_kernel(0.5, 1000)
        assert value == pytest.approx(0.6366200341670445, abs=1e-14)
        assert abs(value - 2.0 / math.pi) < 1e-4

    def test_near_singularity_accuracy(self):
        # tiny offsets from 0 and from K previously hit sine cancellation
        for K in (8, 26, 63, 104):
            for x in (1e-15, -1.7763568394002505e-15, K - 3e-15, K + 2e-15):
                assert abs(abs(dirichlet_kernel(x, K)) - 1.0) < 1e-12, (K, x)

    def test_magnitude_periodicity(self):
        rng = np.random.default_rng(31)
        xs = np.concatenate([rng.uniform(-50.0, 50.0, 2000),
                             [1e-16, -1e-16, 12.999999999999998]])
        for K in (4, 7, 26, 63, 128):
            a = np.abs(dirichlet_kernel(xs, K))
            b = np.abs(dirichlet_kernel(xs + K, K))
            assert np.max(np.abs(a - b)) < 1e-12

    def test_monotone_decrease_on_close_interval(self):
        for K in (4, 16, 63, 256):
            xs = np.linspace(0.0, 0.5, 200)
            vals = dirichlet_kernel(xs, K)
            assert np.all(np.diff(vals) < 1e-15)
            assert vals[-1] >= 2.0 / math.pi - 1e-15

    def test_matches_unreduced_formula_at_safe_points(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            K = int(rng.integers(2, 200))
            x = float(rng.uniform(0.3, K - 0.3))
            if abs(x - round(x)) < 1e-3:
                continue
            naive = math.sin(math.pi * x) / (K * math.sin(math.pi * x / K))
            assert dirichlet_kernel(x, K) == pytest.approx(naive, abs=1e-12)

    def test_grid_size_validated(self):
        with pytest.raises(ValueError):
            dirichlet_kernel(0.5, 0)


class TestExpectedCoefficient:
    def test_on_grid_peak(self):
        value = expected_coefficient(TWO_PI * 3 / 8, 3, 8)
        assert abs(value - 1.0) < 1e-12

    def test_grid_orthogonality(self):
        assert abs(expected_coefficient(TWO_PI * 3 / 8, 5, 8)) < 1e-12

    def test_kernel_magnitude_identity_spot(self):
        value = expected_coefficient(2.25, 28, 79)
        kernel = dirichlet_kernel(28 - 79 * 2.25 / TWO_PI, 79)
        assert abs(abs(value) - abs(kernel)) < 1e-12

    def test_direct_summation_oracle(self):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(300):
            K = int(rng.integers(1, 257))
            j = int(rng.integers(0, K))
            theta = float(rng.uniform(0.0, TWO_PI))
            worst = max(worst, abs(expected_coefficient(theta, j, K)
                                   - direct_sum_coefficient(theta, j, K)))
        assert worst < 1e-12

    def test_kernel_magnitude_identity_random(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            K = int(rng.integers(1, 257))
            j = int(rng.integers(0, K))
            theta = float(rng.uniform(0.0, TWO_PI))
            value = abs(expected_coefficient(theta, j, K))
            kernel = abs(dirichlet_kernel(j - K * theta / TWO_PI, K))
            assert abs(value - kernel) < 1e-12

    def test_index_validated(self):
        with pytest.raises(ValueError):
            expected_coefficient(1.0, 8, 8)
        with pytest.raises(ValueError):
            expected_coefficient(1.0, -1, 8)


class TestExpectedSpectrum:
    def test_constant_signal_peaks_at_zero(self):
        spec = expected_spectrum(0.0, 8)
        expected = np.zeros(8, dtype=complex)
        expected[0] = 1.0
        assert np.max(np.abs(spec.coefficients - expected)) < 1e-12

    def test_on_grid_indicator(self):
        spec = expected_spectrum(TWO_PI * 3 / 8, 8)
        expected = np.zeros(8, dtype=complex)
        expected[3] = 1.0
        assert np.max(np.abs(spec.coefficients - expected)) < 1e-12

    def test_off_grid_argmax(self):
        # 79 * 2.25 / (2 pi) ~ 28.29, so the peak bin is 28
        spec = expected_spectrum(2.25, 79)
        assert int(np.argmax(np.abs(spec.coefficients))) == 28

    def test_matches_elementwise_coefficients(self):
        spec = expected_spectrum(1.234, 31)
        per_element = [expected_coefficient(1.234, j, 31) for j in range(31)]
        assert np.max(np.abs(spec.coefficients - np.array(per_element))) < 1e-14

    def test_magnitudes_bounded_by_one(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            K = int(rng.integers(1, 300))
            theta = float(rng.uniform(0.0, TWO_PI))
            mags = np.abs(expected_spectrum(theta, K).coefficients)
            assert np.all(mags <= 1.0 + 1e-12)


class TestClassification:
    def test_spot_cases_near_2_25(self):
        # tone position 79 * 2.25 / (2 pi) = 28.29
        assert classify_frequency(28, 2.25, 79) is FrequencyClass.CLOSE
        assert classify_frequency(29, 2.25, 79) is FrequencyClass.ADJACENT_ONLY
        assert classify_frequency(30, 2.25, 79) is FrequencyClass.NON_ADJACENT
        assert circular_distance(28, 2.25, 79) == pytest.approx(0.29, abs=5e-3)
        assert circular_distance(29, 2.25, 79) == pytest.approx(0.71, abs=5e-3)
        assert circular_distance(30, 2.25, 79) == pytest.approx(1.71, abs=5e-3)

    def test_boundaries(self):
        # tone exactly between bins 3 and 4: both are close (d = 1/2)
        theta = TWO_PI * 3.5 / 8
        assert classify_frequency(3, theta, 8) is FrequencyClass.CLOSE
        assert classify_frequency(4, theta, 8) is FrequencyClass.CLOSE
        # d exactly 1 counts as non-adjacent
        theta = TWO_PI * 3 / 8
        assert classify_frequency(4, theta, 8) is FrequencyClass.NON_ADJACENT
        assert classify_frequency(2, theta, 8) is FrequencyClass.NON_ADJACENT

    def test_periodic_in_index(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            K = int(rng.integers(2, 100))
            j = int(rng.integers(0, K))
            theta = float(rng.uniform(0.0, TWO_PI))
            assert classify_frequency(j, theta, K) is classify_frequency(j + K, theta, K)
            assert classify_frequency(j, theta, K) is classify_frequency(j + 3 * K, theta, K)

    def test_wraparound_distance(self):
        # tone near bin 0: the top index is circularly close to it
        d = circular_distance(62, 0.05, 63)
        assert d == pytest.approx(63 * 0.05 / TWO_PI + 1.0, abs=1e-12)


class TestMagnitudeBounds:
    def test_close_floor_and_non_adjacent_caps(self):
        # independent of the harness scan: classify each index and check the
        # closed-form magnitude against the landmarks
        thetas = np.linspace(0.0, math.pi, 101)
        for K in range(4, 21):
            for theta in thetas:
                mags = np.abs(expected_spectrum(float(theta), K).coefficients)
                for j in range(K):
                    cls = classify_frequency(j, float(theta), K)
                    if cls is FrequencyClass.CLOSE:
                        assert mags[j] >= CLOSE_MAGNITUDE_MIN - 1e-12
                    elif cls is FrequencyClass.NON_ADJACENT:
                        assert mags[j] <= NON_ADJACENT_MAGNITUDE_MAX + 1e-12
                        assert mags[j] <= NON_ADJACENT_ENVELOPE_MAX + 1e-12

    def test_on_grid_close_magnitude_is_one(self):
        # K = 4, theta = pi/2 sits exactly on bin 1
        spec = expected_spectrum(math.pi / 2.0, 4)
        assert abs(spec.coefficients[1]) == pytest.approx(1.0, abs=1e-12)


class TestPhaseValidation:
    def test_range(self):
        assert validate_phase(0.0) == 0.0
        assert validate_phase(6.28) == 6.28
        for bad in (-0.1, TWO_PI, 7.0, math.nan, math.inf):
            with pytest.raises(ValueError):
                validate_phase(bad)
