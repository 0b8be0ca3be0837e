"""Enumeration oracles, bound scans, and seeded Monte Carlo campaigns.

Three kinds of checks live here:

* :func:`exact_estimator_expectation` computes the estimator's expectation by
  brute force — summing over every time index and all four outcome pairs
  weighted by their (clamped) probabilities, with an explicit direct DFT —
  independent of both the closed-form spectrum and the sampling path it
  certifies.
* :func:`lemma_bound_scan` sweeps (K, theta) grids and checks the kernel
  magnitude floor/caps with zero tolerance for violations.
* :func:`monte_carlo_success` and :func:`noise_sweep` run seeded campaigns of
  full estimation runs.  Per-trial seeds are spawned from the master seed and
  the trial index alone, so results are identical for any worker count and
  any trial execution order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .bounds import (
    BoundsQuery,
    BoundsUnachievable,
    grid_size,
    samples_ban,
    samples_gaussian,
    samples_noiseless,
    sigma_max,
)
from .estimator import RunConfig, estimate_phase, run_rfe
from .noise import (
    AdversaryStrategy,
    Ban,
    Dephasing,
    DeviationTable,
    Gaussian,
    HighCoherence,
    Ideal,
    NoiseModel,
    ban_threshold,
    implied_eta_bar,
    noise_to_dict,
)
from .spectrum import (
    CLOSE_MAGNITUDE_MIN,
    NON_ADJACENT_ENVELOPE_MAX,
    NON_ADJACENT_MAGNITUDE_MAX,
    TWO_PI,
    dirichlet_kernel,
)

# Enumeration is O(K^2); past this the oracle is no longer "instant".
MAX_ENUMERATION_GRID = 4096

WILSON_Z_95 = 1.959963984540054


# --- exact expectation oracle ------------------------------------------------

@dataclass(frozen=True, eq=False)
class OracleSpectrum:
    """Exact estimator expectation, and the spectral shift of a fixed
    deviation table when one was supplied."""

    coefficients: np.ndarray
    noise_shift: Optional[np.ndarray]


def _direct_dft(values: np.ndarray) -> np.ndarray:
    """sum_k values[k] exp(-2 pi i j k / K) via explicit phase matrices.

    Deliberately not an FFT: this is the independent cross-check of the
    transform the estimator relies on.  Evaluated in row blocks to cap the
    phase-matrix memory.
    """
    K = values.shape[0]
    out = np.empty(K, dtype=complex)
    k = np.arange(K)
    for start in range(0, K, 256):
        stop = min(start + 256, K)
        j = np.arange(start, stop)[:, None]
        out[start:stop] = (np.exp(-2j * np.pi * j * k / K) * values).sum(axis=1)
    return out


def exact_estimator_expectation(theta: float, grid_size: int,
                                deviations: Optional[DeviationTable] = None) -> OracleSpectrum:
    """Expected coefficient estimates by exhaustive enumeration.

    For each time k the four (c, s) outcomes are weighted by their clamped
    likelihoods; the per-time means are then transformed by direct summation.
    With a deviation table, ``noise_shift[j]`` carries the exact spectral
    shift mean_k (eta1[k] + i eta2[k]) exp(-2 pi i j k / K).
    """
    K = int(grid_size)
    if not 1 <= K <= MAX_ENUMERATION_GRID:
        raise ValueError(f"enumeration supports 1 <= K <= {MAX_ENUMERATION_GRID}, got {K}")
    k = np.arange(K, dtype=float)
    bx = np.cos(k * theta)
    by = np.sin(k * theta)
    if deviations is not None:
        if len(deviations) < K:
            raise ValueError(f"deviation table of length {len(deviations)} "
                             f"does not cover grid size {K}")
        bx = bx + deviations.eta1[:K]
        by = by + deviations.eta2[:K]
    p_c = np.clip((1.0 + bx) / 2.0, 0.0, 1.0)
    p_s = np.clip((1.0 + by) / 2.0, 0.0, 1.0)
    outcome_mean = np.zeros(K, dtype=complex)
    for c in (1.0, -1.0):
        for s in (1.0, -1.0):
            prob = (p_c if c > 0 else 1.0 - p_c) * (p_s if s > 0 else 1.0 - p_s)
            outcome_mean += prob * (c + 1j * s)
    coefficients = _direct_dft(outcome_mean) / K
    noise_shift = None
    if deviations is not None:
        noise_shift = _direct_dft(deviations.eta1[:K] + 1j * deviations.eta2[:K]) / K
    return OracleSpectrum(coefficients=coefficients, noise_shift=noise_shift)


# --- success campaigns --------------------------------------------------------

@dataclass(frozen=True)
class FixedTheta:
    """Every trial estimates the same phase."""

    value: float

    def draw(self, rng: np.random.Generator) -> float:
        return float(self.value)


@dataclass(frozen=True)
class UniformTheta:
    """Per-trial phase drawn uniformly; the default range stays away from the
    endpoints 0 and pi where line distance and circular distance disagree."""

    low: float = 0.2
    high: float = math.pi - 0.2

    def draw(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.low, self.high))


ThetaSampling = Union[FixedTheta, UniformTheta]


@dataclass(frozen=True)
class SuccessStats:
    """Outcome of a campaign of independent estimation trials."""

    trials: int
    successes: int
    rate: float
    wilson_ci_95: tuple[float, float]
    epsilon_used: float
    delta_used: float

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "rate": self.rate,
            "wilson_ci_95": list(self.wilson_ci_95),
            "epsilon_used": self.epsilon_used,
            "delta_used": self.delta_used,
        }


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z_95) -> tuple[float, float]:
    """Wilson score interval for a binomial rate (well-behaved at small n)."""
    if trials < 0 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    if trials == 0:
        return (0.0, 1.0)
    n = trials
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    """Generator for one trial, derived from (master seed, trial index) only.

    This is the whole reproducibility scheme: trial streams do not depend on
    execution order or on how trials are split across workers.
    """
    return np.random.default_rng(np.random.SeedSequence(int(master_seed), spawn_key=(int(index),)))


def _error(theta_hat: float, theta: float, distance: str) -> float:
    err = abs(theta_hat - theta)
    if distance == "circular":
        err = min(err, TWO_PI - err)
    elif distance != "line":
        raise ValueError(f'distance must be "line" or "circular", got {distance!r}')
    return err


def _run_one_trial(epsilon: float, delta: float, noise: NoiseModel,
                   sampling: ThetaSampling, master_seed: int, index: int,
                   distance: str, samples_override: Optional[int],
                   grid_override: Optional[int]) -> bool:
    rng = trial_rng(master_seed, index)
    theta = sampling.draw(rng)
    run_seed = int.from_bytes(rng.bytes(8), "little")
    if samples_override is not None:
        K = grid_override if grid_override is not None else grid_size(epsilon)
        result = run_rfe(RunConfig(samples=int(samples_override), grid_size=K,
                                   theta=theta, noise=noise, seed=run_seed))
    else:
        result = estimate_phase(epsilon, delta, noise, theta, seed=run_seed)
    return _error(result.theta_hat, theta, distance) <= epsilon


def _success_block(payload) -> int:
    (epsilon, delta, noise, sampling, master_seed, start, stop,
     distance, samples_override, grid_override) = payload
    hits = 0
    for index in range(start, stop):
        hits += _run_one_trial(epsilon, delta, noise, sampling, master_seed,
                               index, distance, samples_override, grid_override)
    return hits


def monte_carlo_success(query: BoundsQuery, trials: int,
                        theta_sampling: ThetaSampling,
                        master_seed: int, workers: Optional[int] = 1,
                        distance: str = "line",
                        samples_override: Optional[int] = None,
                        grid_override: Optional[int] = None) -> SuccessStats:
    """Estimate the success rate Pr(|theta_hat - theta| <= epsilon).

    Each trial runs :func:`rfe.estimator.estimate_phase` with its own derived
    seed (pass ``samples_override``/``grid_override`` to bypass the certified
    sample count, e.g. for deliberately under-sampled demos).  ``workers``
    only distributes the trial indices; it cannot change the statistics.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers is None or int(workers) < 1:
        workers = os.cpu_count() or 1
    workers = int(workers)
    args = (query.epsilon, query.delta, query.noise, theta_sampling,
            int(master_seed), 0, trials, distance, samples_override, grid_override)
    if workers == 1:
        successes = _success_block(args)
    else:
        block = max(1, math.ceil(trials / (4 * workers)))
        payloads = [args[:5] + (start, min(start + block, trials)) + args[7:]
                    for start in range(0, trials, block)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            successes = sum(pool.map(_success_block, payloads))
    return SuccessStats(trials=trials, successes=successes, rate=successes / trials,
                        wilson_ci_95=wilson_interval(successes, trials),
                        epsilon_used=query.epsilon, delta_used=query.delta)


def gaussian_shift_variance(sigma: float, grid_size: int, draws: int,
                            seed: int, chunk: int = 20000) -> np.ndarray:
    """Empirical Var of the spectral shift of fresh Gaussian deviation draws.

    For each draw, eta_hat[j] = mean_k (eta1[k] + i eta2[k]) exp(-2 pi i jk/K)
    with 2K i.i.d. N(0, sigma^2) deviations; returns the per-j mean of
    |eta_hat|^2 over ``draws`` draws.  The analytic value is 2 sigma^2 / K for
    every j.
    """
    K = int(grid_size)
    draws = int(draws)
    if K < 1 or draws < 1:
        raise ValueError("need grid size >= 1 and draws >= 1")
    rng = np.random.default_rng(int(seed))
    acc = np.zeros(K)
    done = 0
    while done < draws:
        m = min(chunk, draws - done)
        eta1 = rng.standard_normal((m, K)) * sigma
        eta2 = rng.standard_normal((m, K)) * sigma
        shift = np.fft.fft(eta1 + 1j * eta2, axis=1) / K
        acc += (np.abs(shift) ** 2).sum(axis=0)
        done += m
    return acc / draws


# --- kernel bound scans -------------------------------------------------------

@dataclass(frozen=True)
class LemmaScanReport:
    """Worst margins of the kernel magnitude bounds over a (K, theta) grid."""

    k_values: tuple
    n_theta: int
    tolerance: float
    points_checked: int
    violation_count: int
    violations: tuple  # first few offenders as dicts, for diagnosis
    min_close_magnitude: float
    max_non_adjacent_magnitude: float
    close_margin: float          # min(|f| - 2/pi) over close frequencies
    non_adjacent_margin: float   # min(10/(9 pi) - |f|) over non-adjacent ones
    envelope_margin: float       # min(1/(2 sqrt 2) - |f|) over non-adjacent ones
    passed: bool

    def to_dict(self) -> dict:
        return {
            "k_values": [int(k) for k in self.k_values],
            "n_theta": self.n_theta,
            "tolerance": self.tolerance,
            "points_checked": self.points_checked,
            "violation_count": self.violation_count,
            "violations": list(self.violations),
            "min_close_magnitude": self.min_close_magnitude,
            "max_non_adjacent_magnitude": self.max_non_adjacent_magnitude,
            "close_margin": self.close_margin,
            "non_adjacent_margin": self.non_adjacent_margin,
            "envelope_margin": self.envelope_margin,
            "passed": self.passed,
        }


def lemma_bound_scan(k_values: Sequence[int], n_theta: int,
                     tolerance: float = 1e-12) -> LemmaScanReport:
    """Scan theta in [0, pi] and every index j, checking the magnitude floor
    2/pi for close frequencies and the caps 10/(9 pi) and 1/(2 sqrt 2) for
    non-adjacent ones (the caps need K >= 4)."""
    k_values = tuple(int(k) for k in k_values)
    if not k_values or min(k_values) < 4 or max(k_values) > 1024:
        raise ValueError("k_values must be a non-empty subset of [4, 1024]")
    n_theta = int(n_theta)
    if n_theta < 2:
        raise ValueError("need at least 2 theta grid points")
    thetas = np.linspace(0.0, math.pi, n_theta)
    violations: list[dict] = []
    violation_count = 0
    points = 0
    min_close = math.inf
    max_nonadj = 0.0
    for K in k_values:
        tone = K * thetas / TWO_PI                           # (n_theta,)
        x = np.arange(K)[:, None] - tone[None, :]            # (K, n_theta)
        r = np.mod(np.abs(x), K)
        d = np.minimum(r, K - r)
        mags = np.abs(dirichlet_kernel(x, K))
        points += mags.size
        close = d <= 0.5
        nonadj = d >= 1.0
        if np.any(close):
            min_close = min(min_close, float(mags[close].min()))
        if np.any(nonadj):
            max_nonadj = max(max_nonadj, float(mags[nonadj].max()))
        bad = ((close & (mags < CLOSE_MAGNITUDE_MIN - tolerance))
               | (nonadj & (mags > NON_ADJACENT_MAGNITUDE_MAX + tolerance))
               | (nonadj & (mags > NON_ADJACENT_ENVELOPE_MAX + tolerance)))
        if np.any(bad):
            j_bad, t_bad = np.nonzero(bad)
            violation_count += j_bad.size
            for j_idx, t_idx in zip(j_bad[:5], t_bad[:5]):
                if len(violations) < 20:
                    violations.append({
                        "K": K, "j": int(j_idx), "theta": float(thetas[t_idx]),
                        "magnitude": float(mags[j_idx, t_idx]),
                        "distance": float(d[j_idx, t_idx]),
                    })
    return LemmaScanReport(
        k_values=k_values, n_theta=n_theta, tolerance=tolerance,
        points_checked=points, violation_count=violation_count,
        violations=tuple(violations),
        min_close_magnitude=min_close,
        max_non_adjacent_magnitude=max_nonadj,
        close_margin=min_close - CLOSE_MAGNITUDE_MIN,
        non_adjacent_margin=NON_ADJACENT_MAGNITUDE_MAX - max_nonadj,
        envelope_margin=NON_ADJACENT_ENVELOPE_MAX - max_nonadj,
        passed=violation_count == 0,
    )


# --- noise sweeps --------------------------------------------------------------

SWEEP_FAMILIES = ("ideal", "ban", "gaussian", "dephasing", "high_coherence")


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a sweep: prediction, achievability, measured stats."""

    family: str
    parameter: float
    predicted_samples: Optional[int]
    achievable: bool
    stats: Optional[SuccessStats]
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameter": self.parameter,
            "predicted_samples": self.predicted_samples,
            "achievable": self.achievable,
            "stats": self.stats.to_dict() if self.stats else None,
            "extras": dict(self.extras),
        }


def _sweep_point_plan(family: str, parameter: float, epsilon: float, delta: float,
                      strategy: AdversaryStrategy):
    """Resolve (model, epsilon for this point, predicted M or None, extras)."""
    extras: dict = {}
    if family == "ideal":
        eps_pt = float(parameter)
        try:
            return Ideal(), eps_pt, samples_noiseless(eps_pt, delta), extras
        except ValueError:
            return Ideal(), eps_pt, None, extras
    if family == "ban":
        model = Ban(eta_bar=float(parameter), strategy=strategy)
        if parameter < ban_threshold():
            return model, epsilon, samples_ban(epsilon, delta, parameter), extras
        return model, epsilon, None, extras
    if family == "gaussian":
        model = Gaussian(sigma=float(parameter))
        if parameter < sigma_max(epsilon, delta):
            return model, epsilon, samples_gaussian(epsilon, delta, parameter), extras
        return model, epsilon, None, extras
    if family in ("dephasing", "high_coherence"):
        # parameter is the timescale ratio K/T2 at this point's grid size
        K = grid_size(epsilon)
        t2 = K / float(parameter)
        model = Dephasing(t2=t2) if family == "dephasing" else HighCoherence(t2=t2)
        implied = implied_eta_bar(model, K)
        extras["implied_eta_bar"] = implied
        if implied < ban_threshold():
            return model, epsilon, samples_ban(epsilon, delta, implied), extras
        return model, epsilon, None, extras
    raise ValueError(f"unknown sweep family {family!r}; choose from {SWEEP_FAMILIES}")


def noise_sweep(family: str, values: Sequence[float], epsilon: float, delta: float,
                trials_per_point: int, master_seed: int,
                strategy: AdversaryStrategy = AdversaryStrategy.SIGN_FLIP,
                theta_sampling: Optional[ThetaSampling] = None,
                workers: Optional[int] = 1, distance: str = "line") -> list[SweepPoint]:
    """Success-rate sweep over one noise family's parameter grid.

    For family ``ideal`` the swept parameter is epsilon itself; for ``ban``
    it is eta_bar, for ``gaussian`` sigma, and for ``dephasing`` /
    ``high_coherence`` the timescale ratio K/T2.  Points at or past the
    family's threshold are marked unachievable and not run.
    """
    if theta_sampling is None:
        theta_sampling = UniformTheta()
    points: list[SweepPoint] = []
    for index, parameter in enumerate(values):
        model, eps_pt, predicted, extras = _sweep_point_plan(
            family, float(parameter), epsilon, delta, strategy)
        if predicted is None:
            points.append(SweepPoint(family=family, parameter=float(parameter),
                                     predicted_samples=None, achievable=False,
                                     stats=None, extras=extras))
            continue
        point_seed = int(np.random.SeedSequence(int(master_seed), spawn_key=(index,))
                         .generate_state(1, np.uint64)[0])
        stats = monte_carlo_success(BoundsQuery(eps_pt, delta, model),
                                    trials_per_point, theta_sampling, point_seed,
                                    workers=workers, distance=distance)
        points.append(SweepPoint(family=family, parameter=float(parameter),
                                 predicted_samples=predicted, achievable=True,
                                 stats=stats, extras=extras))
    return points


def sweep_csv(points: Sequence[SweepPoint]) -> str:
    """Sweep table as CSV; unachievable points keep empty numeric cells."""
    lines = ["parameter,M_predicted,trials,successes,rate,ci_lo,ci_hi"]
    for p in points:
        if p.stats is None:
            lines.append(f"{p.parameter!r},,0,0,,,")
        else:
            lo, hi = p.stats.wilson_ci_95
            lines.append(f"{p.parameter!r},{p.predicted_samples},{p.stats.trials},"
                         f"{p.stats.successes},{p.stats.rate!r},{lo!r},{hi!r}")
    return "\n".join(lines) + "\n"
