"""Randomized Fourier estimation of a phase from simulated Hadamard tests.

One run draws M time indices k_i uniformly from {0, ..., K-1}, samples an
outcome pair (c_i, s_i) per index from the (possibly noise-perturbed)
likelihoods, accumulates the K coefficient estimates

    f_j = (1/M) sum_i (c_i + i s_i) exp(-2 pi i k_i j / K),

and returns theta_hat = (2 pi / K) * argmax_j |f_j| (ties to the smallest j).
The accumulation groups samples by time index first, which turns the update
loop into one length-K transform while keeping O(K) state.

Depth accounting: total_depth sums the drawn k_i.  Each draw executes two
circuits (one per outcome of the pair), so the circuit count is 2M and the
controlled-unitary count is 2 * total_depth; totals here follow the
one-test-per-draw convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import bounds_report
from .noise import Ideal, NoiseModel, bias_table, draw_run_noise, noise_to_dict
from .sampler import sample_pairs
from .spectrum import TWO_PI, validate_phase


@dataclass(frozen=True)
class RunConfig:
    """Complete, reproducible description of one estimation run."""

    samples: int
    grid_size: int
    theta: float
    noise: NoiseModel = Ideal()
    seed: int = 0

    def __post_init__(self):
        if int(self.samples) < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if int(self.grid_size) < 1:
            raise ValueError(f"grid size must be >= 1, got {self.grid_size}")
        validate_phase(self.theta)
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
    """Estimated coefficients plus run provenance; each |f_j| <= sqrt(2)."""

    coefficients: np.ndarray  # complex, length grid_size
    samples_used: int
    total_depth: int
    clamp_count: int


@dataclass(frozen=True, eq=False)
class TrialResult:
    """One run's output: theta_hat = 2 pi winning_index / grid_size."""

    theta_hat: float
    winning_index: int
    spectrum: SpectrumEstimate


def winning_frequency(coefficients: np.ndarray) -> int:
    """Index of the largest-magnitude coefficient, smallest index on ties."""
    return int(np.argmax(np.abs(np.asarray(coefficients))))


def run_rfe(config: RunConfig) -> TrialResult:
    """Execute one randomized-Fourier-estimation run.

    The generator seeded by ``config.seed`` is consumed in a fixed order
    (per-run noise table if the model has one, then time indices, then
    outcome uniforms), so equal configs give bitwise-equal results.  Gaussian
    deviation tables are drawn once here and held fixed for the whole run.
    """
    M = int(config.samples)
    K = int(config.grid_size)
    rng = np.random.default_rng(int(config.seed))
    run_noise = draw_run_noise(config.noise, K, rng)
    bx, by = bias_table(config.noise, config.theta, K, run_noise=run_noise)
    ks = rng.integers(0, K, size=M)
    c, s, clamped = sample_pairs(bx[ks], by[ks], rng)
    z = (np.bincount(ks, weights=c, minlength=K)
         + 1j * np.bincount(ks, weights=s, minlength=K))
    coefficients = np.fft.fft(z) / M
    j = winning_frequency(coefficients)
    spectrum = SpectrumEstimate(coefficients=coefficients, samples_used=M,
                                total_depth=int(ks.sum()), clamp_count=int(clamped.sum()))
    return TrialResult(theta_hat=TWO_PI * j / K, winning_index=j, spectrum=spectrum)


def estimate_phase(epsilon: float, delta: float, noise: NoiseModel,
                   theta: float, seed: int = 0) -> TrialResult:
    """Run with sample count and grid size certified for (epsilon, delta).

    epsilon >= pi/2 returns theta_hat = pi/2 without sampling (pi/2 is
    epsilon-accurate for any phase in [0, pi]), encoded as winning index 1 on
    a 4-point grid.  Noise at or past its threshold raises
    :class:`rfe.bounds.BoundsUnachievable` rather than running without a
    guarantee.
    """
    plan = bounds_report(epsilon, delta, noise)
    if plan.samples == 0:
        spectrum = SpectrumEstimate(coefficients=np.zeros(plan.grid_size, dtype=complex),
                                    samples_used=0, total_depth=0, clamp_count=0)
        return TrialResult(theta_hat=math.pi / 2.0, winning_index=1, spectrum=spectrum)
    config = RunConfig(samples=plan.samples, grid_size=plan.grid_size,
                       theta=theta, noise=noise, seed=seed)
    return run_rfe(config)


def config_to_dict(config: RunConfig) -> dict:
    return {
        "samples": int(config.samples),
        "grid_size": int(config.grid_size),
        "theta": float(config.theta),
        "noise": noise_to_dict(config.noise),
        "seed": int(config.seed),
    }


def trial_to_dict(result: TrialResult) -> dict:
    """JSON-ready description of a trial result."""
    coeffs = result.spectrum.coefficients
    return {
        "theta_hat": float(result.theta_hat),
        "winning_index": int(result.winning_index),
        "spectrum": {
            "samples_used": int(result.spectrum.samples_used),
            "total_depth": int(result.spectrum.total_depth),
            "clamp_count": int(result.spectrum.clamp_count),
            "coefficients": [[float(v.real), float(v.imag)] for v in coeffs],
        },
    }


def spectrum_csv(coefficients: np.ndarray) -> str:
    """CSV dump of a coefficient vector: one row (j, re, im, abs) per index."""
    lines = ["j,re,im,abs"]
    for j, v in enumerate(np.asarray(coefficients)):
        v = complex(v)
        lines.append(f"{j},{v.real!r},{v.imag!r},{abs(v)!r}")
    return "\n".join(lines) + "\n"
