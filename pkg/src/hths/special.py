"""Incomplete gamma functions (non-regularized lower/upper pair).

Series expansion below the ``x < s + 1`` switchover, Lentz continued
fraction above it; the two routes give uniform relative accuracy across
the quadrant ``s > 0``, ``x >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .backend import maybe_njit

_EPS = 2.220446049250313e-16
_MAX_ITER = 500


@dataclass(frozen=True)
class IncompleteGammaPair:
    """Values of the lower and upper incomplete gamma functions at (s, x)."""

    lower: float
    upper: float

    @property
    def total(self) -> float:
        return self.lower + self.upper


@maybe_njit
def _lower_series(s: float, x: float) -> float:
    # gamma_L(s, x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n))
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(s * math.log(x) - x)


@maybe_njit
def _upper_cf(s: float, x: float) -> float:
    # gamma_U(s, x) = x^s e^-x / (x + 1 - s - 1(1-s)/(x + 3 - s - ...))
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(s * math.log(x) - x)


@maybe_njit
def _incomplete_gamma_pair(s: float, x: float) -> tuple[float, float]:
    full = math.exp(math.lgamma(s))
    if x == 0.0:
        return 0.0, full
    if x < s + 1.0:
        lower = _lower_series(s, x)
        return lower, full - lower
    upper = _upper_cf(s, x)
    return full - upper, upper


def incomplete_gamma(s: float, x: float) -> IncompleteGammaPair:
    """Non-regularized lower/upper incomplete gamma values at shape s, cut x.

    The pair sums to the complete gamma function Gamma(s).
    """
    if not s > 0.0:
        raise ValueError(f"shape must be positive, got {s}")
    if x < 0.0:
        raise ValueError(f"cut point must be nonnegative, got {x}")
    lower, upper = _incomplete_gamma_pair(float(s), float(x))
    return IncompleteGammaPair(lower=lower, upper=upper)


def regularized_lower(s: float, x: float) -> float:
    """P(s, x) = gamma_L(s, x) / Gamma(s); also the Gamma(s, 1) CDF at x."""
    pair = incomplete_gamma(s, x)
    return pair.lower / pair.total
