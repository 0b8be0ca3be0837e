"""Sampling of paired Hadamard-test outcomes from bias values.

A pair of +-1 outcomes (c, s) is drawn for one time index k from independent
likelihoods Pr(c=+1) = (1 + bx)/2 and Pr(s=+1) = (1 + by)/2 (two separate
circuit executions, so no shared randomness within a pair).  Biases outside
[-1, 1] make the raw probabilities non-physical; they are clamped to [0, 1]
and the event is flagged so experiments can count how often a noise model
left the physical regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# A probability changed by more than this during clamping counts as a clamp
# event; smaller changes are rounding noise.
CLAMP_TOLERANCE = 1e-15


@dataclass(frozen=True)
class HadamardOutcome:
    """One (c, s) outcome pair at time k."""

    c: int
    s: int
    k: int
    clamped: bool


def _probability(bias_value: float) -> tuple[float, bool]:
    p = (1.0 + bias_value) / 2.0
    clipped = min(max(p, 0.0), 1.0)
    return clipped, abs(clipped - p) > CLAMP_TOLERANCE


def sample_pair(bx: float, by: float, k: int, rng: np.random.Generator) -> HadamardOutcome:
    """Draw one outcome pair for bias values (bx, by) at time k.

    Consumes exactly two uniforms from ``rng`` (c first, then s), so a loop of
    calls is stream-equivalent to one :func:`sample_pairs` call.
    """
    if not (math.isfinite(bx) and math.isfinite(by)):
        raise ValueError(f"bias values must be finite, got ({bx!r}, {by!r})")
    k = int(k)
    if k < 0:
        raise ValueError(f"time index must be >= 0, got {k}")
    p_c, clamped_c = _probability(bx)
    p_s, clamped_s = _probability(by)
    c = 1 if rng.random() < p_c else -1
    s = 1 if rng.random() < p_s else -1
    return HadamardOutcome(c=c, s=s, k=k, clamped=clamped_c or clamped_s)


def sample_pairs(bx: np.ndarray, by: np.ndarray, rng: np.random.Generator):
    """Vectorized outcome pairs for per-sample bias arrays.

    Returns (c, s, clamped): two float arrays of +-1 values and a boolean
    array marking samples whose likelihood needed clamping.  Uniforms are
    consumed in C order (c then s per sample), matching repeated
    :func:`sample_pair` calls on the same generator.
    """
    bx = np.asarray(bx, dtype=float)
    by = np.asarray(by, dtype=float)
    if bx.shape != by.shape or bx.ndim != 1:
        raise ValueError("bias arrays must be equal-length 1-d sequences")
    if not (np.all(np.isfinite(bx)) and np.all(np.isfinite(by))):
        raise ValueError("bias values must be finite")
    p_c_raw = (1.0 + bx) / 2.0
    p_s_raw = (1.0 + by) / 2.0
    p_c = np.clip(p_c_raw, 0.0, 1.0)
    p_s = np.clip(p_s_raw, 0.0, 1.0)
    clamped = (np.abs(p_c - p_c_raw) > CLAMP_TOLERANCE) | (np.abs(p_s - p_s_raw) > CLAMP_TOLERANCE)
    u = rng.random((bx.shape[0], 2))
    c = np.where(u[:, 0] < p_c, 1.0, -1.0)
    s = np.where(u[:, 1] < p_s, 1.0, -1.0)
    return c, s, clamped
