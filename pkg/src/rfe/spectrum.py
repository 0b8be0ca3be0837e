"""Expected Fourier spectrum of a uniformly sampled phase tone.

Averaging outcome pairs of the unit-modulus signal g(k) = exp(i k theta) over
times k = 0, ..., K-1 yields coefficient expectations that factor through the
periodic kernel

    S_K(x) = sin(pi x) / (K sin(pi x / K)),

a normalized Dirichlet kernel: coefficient j has magnitude
|S_K(j - K theta / (2 pi))|.  This module evaluates the kernel and the full
complex coefficients in closed form and classifies grid frequencies by their
circular distance (in bins) to the tone.

Two magnitude landmarks make peak picking robust: a frequency within half a
bin of the tone has magnitude at least 2/pi, while a frequency one bin or
more away has magnitude at most 1/(K sin(pi/K)), which for K >= 4 is at most
1/(2 sqrt 2) <= 10/(9 pi).  The gap of 8/(9 pi) between the two levels is the
buffer that statistical estimates of the coefficients are allowed to consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi

CLOSE_MAGNITUDE_MIN = 2.0 / math.pi
NON_ADJACENT_MAGNITUDE_MAX = 10.0 / (9.0 * math.pi)
# Envelope value 1/(K sin(pi/K)) at K = 4, the worst case over K >= 4.
NON_ADJACENT_ENVELOPE_MAX = 1.0 / (2.0 * math.sqrt(2.0))


class FrequencyClass(Enum):
    """Position of a grid frequency relative to the tone, in bins."""

    CLOSE = "close"                  # within 1/2 bin
    ADJACENT_ONLY = "adjacent_only"  # more than 1/2 but less than 1 bin
    NON_ADJACENT = "non_adjacent"    # one bin or more


@dataclass(frozen=True, eq=False)
class ExpectedSpectrum:
    """Closed-form expected coefficients for one (theta, K) pair."""

    grid_size: int
    coefficients: np.ndarray  # complex, length grid_size


def validate_phase(theta: float) -> float:
    """Check that theta is usable as a simulation phase.

    Any value in [0, 2*pi) is accepted; accuracy guarantees are only claimed
    for theta in [0, pi] (estimates are returned unfolded, so indices past
    K/2 map to phases above pi).
    """
    theta = float(theta)
    if not math.isfinite(theta) or not 0.0 <= theta < TWO_PI:
        raise ValueError(f"phase must lie in [0, 2*pi), got {theta!r}")
    return theta


def _validate_grid_size(grid_size: int) -> int:
    grid_size = int(grid_size)
    if grid_size < 1:
        raise ValueError(f"grid size must be >= 1, got {grid_size}")
    return grid_size


def _sinpi(v: np.ndarray) -> np.ndarray:
    """sin(pi v) with the argument reduced to the nearest integer first.

    Naive sin(np.pi * v) loses all relative accuracy near the zeros at
    integer v (the absolute error of the rounded argument pi*v rivals the
    distance to the zero); reducing v first keeps the relative error at
    machine level everywhere.
    """
    n = np.rint(v)
    f = v - n
    return np.where(np.mod(n, 2.0) == 0.0, 1.0, -1.0) * np.sin(np.pi * f)


def dirichlet_kernel(x, grid_size: int):
    """Evaluate S_K(x) = sin(pi x) / (K sin(pi x / K)).

    Total function: the removable singularities at x = m K (m integer) are
    filled with their limit (-1)^(m (K-1)).  Accepts scalars or arrays.  The
    argument is folded into [-K/2, K/2] before evaluation (|S_K| is
    K-periodic), and the numerator sine is reduced to its nearest zero, so
    values stay relatively accurate arbitrarily close to the singularities.
    """
    K = _validate_grid_size(grid_size)
    xs = np.asarray(x, dtype=float)
    r = np.mod(xs, K)
    m = np.rint((xs - r) / K)
    folded = r > K / 2.0
    r = np.where(folded, r - K, r)
    m = m + folded
    sign = np.where(np.mod(m * (K - 1), 2.0) == 0.0, 1.0, -1.0)
    # |pi r / K| <= pi/2 keeps the denominator clear of every sine zero
    # except r = 0, which is the removable point handled explicitly.
    den = np.where(r == 0.0, 1.0, K * np.sin(np.pi * r / K))
    vals = np.where(r == 0.0, 1.0, _sinpi(r) / den)
    out = sign * vals
    if np.ndim(x) == 0:
        return float(out)
    return out


def expected_coefficient(theta: float, j: int, grid_size: int) -> complex:
    """Expected estimate of coefficient j for a tone at phase theta.

    Equals (1/K) sum_k exp(i k theta) exp(-2 pi i j k / K), evaluated in the
    well-conditioned product form exp(-i pi x (K-1)/K) * S_K(x) with
    x = j - K theta / (2 pi).  On-grid phases (theta = 2 pi j / K) hit the
    removable singularity and return 1, the limit.
    """
    K = _validate_grid_size(grid_size)
    theta = validate_phase(theta)
    j = int(j)
    if not 0 <= j < K:
        raise ValueError(f"frequency index must satisfy 0 <= j < {K}, got {j}")
    x = j - K * theta / TWO_PI
    return complex(np.exp(-1j * np.pi * x * (K - 1) / K) * dirichlet_kernel(x, K))


def expected_spectrum(theta: float, grid_size: int) -> ExpectedSpectrum:
    """All K expected coefficients of a tone at phase theta."""
    K = _validate_grid_size(grid_size)
    theta = validate_phase(theta)
    x = np.arange(K) - K * theta / TWO_PI
    coefficients = np.exp(-1j * np.pi * x * (K - 1) / K) * dirichlet_kernel(x, K)
    return ExpectedSpectrum(grid_size=K, coefficients=coefficients)


def circular_distance(j, theta: float, grid_size: int):
    """Distance in bins between index j and the tone position K theta/(2 pi).

    Computed mod K (d(j) = d(j + K)), extending the classification to all
    integer indices consistently with the kernel's K-periodic magnitude.
    Accepts scalar or array j.
    """
    K = _validate_grid_size(grid_size)
    theta = validate_phase(theta)
    r = np.mod(np.abs(np.asarray(j, dtype=float) - K * theta / TWO_PI), K)
    d = np.minimum(r, K - r)
    if np.ndim(j) == 0:
        return float(d)
    return d


def classify_frequency(j: int, theta: float, grid_size: int) -> FrequencyClass:
    """Classify index j as close (d <= 1/2), adjacent-only (1/2 < d < 1), or
    non-adjacent (d >= 1) by circular distance d to the tone."""
    d = circular_distance(int(j), theta, grid_size)
    if d <= 0.5:
        return FrequencyClass.CLOSE
    if d < 1.0:
        return FrequencyClass.ADJACENT_ONLY
    return FrequencyClass.NON_ADJACENT
