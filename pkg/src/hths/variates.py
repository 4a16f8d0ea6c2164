"""Gamma random variates under the rate parameterization.

Marsaglia-Tsang squeeze for shape >= 1; shapes in (0, 1) — which the
hierarchies produce routinely via p and 1-p — are boosted to shape+1 and
corrected with a uniform power, avoiding the rejection blowup at tiny shapes.
"""
from __future__ import annotations

import numpy as np

from .backend import maybe_njit


@maybe_njit
def gamma_variate(rng, shape: float, rate: float) -> float:
    """One Gamma(shape, rate) draw (mean shape/rate) from ``rng``."""
    boost = 1.0
    s = shape
    if s < 1.0:
        # X_{a} = X_{a+1} * U^{1/a}
        u = rng.random()
        while u <= 0.0:
            u = rng.random()
        boost = u ** (1.0 / s)
        s += 1.0
    d = s - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    while True:
        x = rng.standard_normal()
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = rng.random()
        if u < 1.0 - 0.0331 * x * x * x * x:
            return boost * d * v / rate
        if u > 0.0 and np.log(u) < 0.5 * x * x + d * (1.0 - v + np.log(v)):
            return boost * d * v / rate


def sample_gamma(shape: float, rate: float, rng: np.random.Generator) -> float:
    """Gamma(shape, rate) draw with domain validation (mean = shape/rate)."""
    if not shape > 0.0:
        raise ValueError(f"shape must be positive, got {shape}")
    if not rate > 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    return gamma_variate(rng, float(shape), float(rate))


def sample_gamma_array(
    shape: np.ndarray | float, rate: np.ndarray | float, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized convenience wrapper; parameters broadcast against ``size``."""
    shp = np.broadcast_to(np.asarray(shape, dtype=float), (size,))
    rt = np.broadcast_to(np.asarray(rate, dtype=float), (size,))
    out = np.empty(size)
    for i in range(size):
        out[i] = gamma_variate(rng, shp[i], rt[i])
    return out
