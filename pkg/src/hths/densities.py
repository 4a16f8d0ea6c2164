"""Closed-form prior densities of the local scales and their exact samplers.

All evaluators work internally in log space; the log-Cauchy families put
non-negligible mass beyond gamma = 1e308, so anything quantitative (tails,
normalization) is also exposed on the log-gamma / logit-tau axis, where every
family has a simple closed form valid for the whole real line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import CLOSED_FORM_FAMILIES, PriorFamily
from .quadrature import QuadratureSpec, integrate
from .variates import gamma_variate

_PI2 = math.pi * math.pi


class UnsupportedFamilyError(ValueError):
    """Requested density/sampler is not available for this family."""


def _require_closed_form(family: PriorFamily) -> None:
    if family not in CLOSED_FORM_FAMILIES:
        raise UnsupportedFamilyError(
            f"{family.label} has no closed-form local-scale marginal; "
            "use the numerical marginal machinery instead"
        )


def _log_ratio_log_over_gm1(gamma: float) -> float:
    """log(log(gamma)/(gamma-1)), finite through the removable point gamma=1."""
    e = gamma - 1.0
    if abs(e) < 1e-3:
        # log(1+e)/e = 1 - e/2 + e^2/3 - e^3/4 + O(e^4)
        return math.log(1.0 - e / 2.0 + e * e / 3.0 - e * e * e / 4.0)
    return math.log(math.log(gamma) / e)


def log_density_gamma(family: PriorFamily, gamma: float) -> float:
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    _require_closed_form(family)
    lg = math.log(gamma)
    if family is PriorFamily.HS:
        return -0.5 * lg - math.log(math.pi) - math.log1p(gamma)
    if family is PriorFamily.HS_PLUS:
        return -0.5 * lg + _log_ratio_log_over_gm1(gamma) - 2.0 * math.log(math.pi)
    if family is PriorFamily.HTHS:
        return -lg - math.log(lg * lg + _PI2)
    return math.log(2.0) - lg - math.log(lg * lg + 4.0 * _PI2)


def density_gamma(family: PriorFamily, gamma: float) -> float:
    """Marginal prior density of the local scale gamma."""
    return math.exp(log_density_gamma(family, gamma))


def density_tau(family: PriorFamily, tau: float) -> float:
    """Marginal prior density of the shrinkage profile tau = gamma/(1+gamma)."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in the open interval (0, 1), got {tau}")
    _require_closed_form(family)
    tt = tau * (1.0 - tau)
    u = math.log(tau) - math.log1p(-tau)
    if family is PriorFamily.HS:
        return 1.0 / (math.pi * math.sqrt(tt))
    if family is PriorFamily.HS_PLUS:
        d = 2.0 * tau - 1.0
        if abs(d) < 1e-3:
            # logit(tau)/(2 tau - 1) -> 2 + (8/3) d^2/4 ... expand in d
            ratio = 2.0 + (2.0 / 3.0) * d * d + (2.0 / 5.0) * d ** 4
        else:
            ratio = u / d
        return ratio / (_PI2 * math.sqrt(tt))
    if family is PriorFamily.HTHS:
        return 1.0 / (tt * (u * u + _PI2))
    return 2.0 / (tt * (u * u + 4.0 * _PI2))


def scale_density(family: PriorFamily, u: float) -> float:
    """Density of log(gamma) — equivalently of logit(tau) — at u, any real u.

    Stable closed forms usable arbitrarily far into the tails, where gamma
    itself would overflow a float.
    """
    _require_closed_form(family)
    if family is PriorFamily.HS:
        # 1 / (2 pi cosh(u/2)), written to avoid cosh overflow
        e = math.exp(-0.5 * abs(u)) if abs(u) < 1400.0 else 0.0
        return e / (math.pi * (1.0 + e * e))
    if family is PriorFamily.HS_PLUS:
        if abs(u) < 1e-4:
            return (1.0 - u * u / 24.0) / _PI2
        # u / (2 pi^2 sinh(u/2)), even in u, written to avoid sinh overflow
        e = math.exp(-0.5 * abs(u)) if abs(u) < 1400.0 else 0.0
        return abs(u) * e / (_PI2 * (1.0 - e * e))
    if family is PriorFamily.HTHS:
        return 1.0 / (u * u + _PI2)
    return 2.0 / (u * u + 4.0 * _PI2)


def sample_gamma_marginal(family: PriorFamily, u: float) -> float:
    """Exact inverse-CDF draw of gamma for the log-Cauchy families.

    log(gamma) is Cauchy with scale pi (HTHS) or 2*pi (HTHS+).
    """
    if family not in (PriorFamily.HTHS, PriorFamily.HTHS_PLUS):
        raise UnsupportedFamilyError(
            f"inverse-CDF gamma sampling requires a log-Cauchy family, got {family.label}"
        )
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must lie in (0, 1), got {u}")
    scale = math.pi if family is PriorFamily.HTHS else 2.0 * math.pi
    exponent = scale * math.tan(math.pi * (u - 0.5))
    if exponent > 709.0:
        return math.inf
    if exponent < -745.0:
        return 0.0
    return math.exp(exponent)


@dataclass(frozen=True)
class HierarchyDraw:
    gamma: float
    omega: float
    p: float


def _guarded_gamma_variate(rng, shape: float, rate: float) -> float:
    """Gamma draw that maps under/overflowed rates to the matching endpoint."""
    if rate <= 0.0:
        return math.inf
    if math.isinf(rate):
        return 0.0
    return gamma_variate(rng, shape, rate)


def sample_gamma_hierarchy(family: PriorFamily, rng: np.random.Generator) -> HierarchyDraw:
    """One joint draw of (gamma, omega, p) from the generative gamma hierarchy."""
    if family is PriorFamily.HS:
        omega = gamma_variate(rng, 0.5, 1.0)
        gamma = _guarded_gamma_variate(rng, 0.5, omega)
        return HierarchyDraw(gamma=gamma, omega=omega, p=0.5)
    if family is PriorFamily.HS_PLUS:
        b = gamma_variate(rng, 0.5, 1.0)
        a = _guarded_gamma_variate(rng, 0.5, b)
        omega = _guarded_gamma_variate(rng, 0.5, a)
        gamma = _guarded_gamma_variate(rng, 0.5, omega)
        return HierarchyDraw(gamma=gamma, omega=omega, p=0.5)
    if family is PriorFamily.HTHS:
        p = rng.random()
        # shapes p and 1-p can make a draw underflow to 0; the partner draw
        # then sits at the opposite extreme
        omega = _guarded_gamma_variate(rng, 1.0 - p, 1.0)
        gamma = _guarded_gamma_variate(rng, p, omega)
        return HierarchyDraw(gamma=gamma, omega=omega, p=p)
    raise UnsupportedFamilyError(
        f"hierarchy sampling is defined for HS, HS+ and HTHS, got {family.label}"
    )


class PointMass:
    """Marker for a degenerate prior concentrated at a single point."""

    def __init__(self, location: float):
        self.location = location

    def __repr__(self) -> str:
        return f"PointMass(at={self.location})"


POINT_MASS_HALF = PointMass(0.5)

def _density_p_lambda_exact(p: float) -> float:
    """Marginal pi(p) of the asymmetric variant: int lam p^(lam-1) (1+lam)^-2 dlam.

    Substituting s = lam * log(1/p) reduces the integral to
    (1/p) * int_0^inf s exp(-s) / (s + L)^2 ds with L = log(1/p), which stays
    well conditioned at both endpoints of (0, 1).
    """
    big_l = -math.log(p)

    def integrand(s: float) -> float:
        d = s + big_l
        return s * math.exp(-s) / (d * d)

    spec = QuadratureSpec((0.0, math.inf), 1e-10, 1e-300, max_subdivisions=4000)
    return integrate(integrand, spec, points=(big_l, 1.0)) / p


class _PDensityCache:
    """2048-point logit grid of log pi(p) with monotone (PCHIP) interpolation."""

    def __init__(self, half_width: float = 26.0, size: int = 2048):
        self.half_width = half_width
        grid = np.linspace(-half_width, half_width, size)
        logdens = np.array(
            [math.log(_density_p_lambda_exact(1.0 / (1.0 + math.exp(-u)))) for u in grid]
        )
        from scipy.interpolate import PchipInterpolator

        self._interp = PchipInterpolator(grid, logdens, extrapolate=False)

    def __call__(self, p: float) -> float:
        u = math.log(p) - math.log1p(-p)
        if abs(u) <= self.half_width:
            return float(math.exp(self._interp(u)))
        return _density_p_lambda_exact(p)


_p_cache: _PDensityCache | None = None


def density_p(family: PriorFamily, p: float, cached: bool = True) -> float | PointMass:
    """Prior density of the local decision parameter p at a point in (0, 1).

    HS/HS+ pin p to 1/2 (a point-mass marker is returned, not a density);
    HTHS/HTHS+ mix p uniformly; the lambda variant returns its numerically
    integrated marginal.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if family in (PriorFamily.HS, PriorFamily.HS_PLUS):
        return POINT_MASS_HALF
    if family in (PriorFamily.HTHS, PriorFamily.HTHS_PLUS):
        return 1.0
    if not cached:
        return _density_p_lambda_exact(p)
    global _p_cache
    if _p_cache is None:
        _p_cache = _PDensityCache()
    return _p_cache(p)


def _logit_axis_density_p(u: float) -> float:
    """Density of logit(p) under the lambda variant, valid for all real u."""
    if u < -500.0:
        # pi(p) p (1-p) ~ (1/u^2) (1 - 4/|u| + 18/u^2) as p -> 0
        big_l = -u
        return (1.0 - 4.0 / big_l + 18.0 / (big_l * big_l)) / (big_l * big_l)
    if u > 30.0:
        # pi(p) ~ log(1/(1-p)); everything past here totals ~3e-12
        return u * math.exp(-u)
    p = 1.0 / (1.0 + math.exp(-u))
    return _density_p_lambda_exact(p) * p * (1.0 - p)


def _hybrid_scale_density(direct, closed_tail, cutoff: float = 36.0):
    def g(u: float) -> float:
        if abs(u) <= cutoff:
            return direct(u)
        return closed_tail(u)

    return g


def normalization_gamma(family: PriorFamily, rtol: float = 1e-9) -> float:
    """Integral of density_gamma over (0, inf), computed on the log axis."""
    g = _hybrid_scale_density(
        lambda u: density_gamma(family, math.exp(u)) * math.exp(u),
        lambda u: scale_density(family, u),
        cutoff=600.0,
    )
    spec = QuadratureSpec((-math.inf, math.inf), rtol, 1e-14)
    return integrate(g, spec)


def normalization_tau(family: PriorFamily, rtol: float = 1e-9) -> float:
    """Integral of density_tau over (0, 1), computed on the logit axis."""

    def direct(u: float) -> float:
        tau = 1.0 / (1.0 + math.exp(-u))
        return density_tau(family, tau) * tau * (1.0 - tau)

    # beyond |u| ~ 13 the value 1 - tau loses precision, so hand the tails
    # to the closed logit-axis form
    g = _hybrid_scale_density(direct, lambda u: scale_density(family, u), cutoff=13.0)
    spec = QuadratureSpec((-math.inf, math.inf), rtol, 1e-14)
    return integrate(g, spec)


def normalization_p(rtol: float = 1e-8) -> float:
    """Integral of the lambda-variant pi(p) over (0, 1), on the logit axis."""
    spec = QuadratureSpec((-math.inf, math.inf), rtol, 1e-14, max_subdivisions=4000)
    return integrate(_logit_axis_density_p, spec)
