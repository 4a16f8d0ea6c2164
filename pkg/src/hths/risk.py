"""Numerical marginals of phi, marginal likelihood, tail bounds and KL risk.

None of the phi marginals have closed forms; everything here is adaptive
quadrature over the log-scale axis.  The workhorse identity: with
u = log|phi|,

    pi(phi) = M(u) / |phi|,   M(u) = (2*pi)^{-1/2} * int K(w) c(w - 2u) dw,

where K(w) = exp(w/2 - e^w/2) is a fixed kernel and c is the closed-form
density of log(gamma).  M stays representable for |phi| far beyond float
range, which the 1/(|phi| log^2|phi|) tails of the heavy-tailed families
need for normalization and interval masses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .densities import scale_density
from .families import CLOSED_FORM_FAMILIES, PriorFamily
from .quadrature import QuadratureError, QuadratureSpec, integrate
from .special import incomplete_gamma

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class OriginAsymptoteError(ValueError):
    """The phi marginals diverge at phi = 0; the asymptote is signaled, not valued."""


def _require_closed_form(family: PriorFamily) -> None:
    if family not in CLOSED_FORM_FAMILIES:
        raise ValueError(f"phi-marginal machinery needs a closed-form family, got {family.label}")


def _kernel_weighted_scale_density(family: PriorFamily, u: float, rtol: float = 1e-10) -> float:
    """M(u): the phi marginal at |phi| = e^u, times |phi|."""

    def integrand(w: float) -> float:
        ew = math.exp(w) if w < 700.0 else math.inf
        return math.exp(0.5 * w - 0.5 * ew) * scale_density(family, w - 2.0 * u)

    # kernel decays like e^{w/2} leftward and double-exponentially past w ~ 0;
    # the scale density peaks at w = 2u
    lo = min(0.0, 2.0 * u) - 400.0
    spec = QuadratureSpec((lo, 40.0), rtol, 1e-300, max_subdivisions=4000)
    points = [0.0]
    if lo < 2.0 * u < 39.0:
        points.append(2.0 * u)
    return integrate(integrand, spec, points=tuple(points)) / _SQRT_2PI


def phi_marginal(family: PriorFamily, phi: float, rtol: float = 1e-10) -> float:
    """Prior marginal density of phi (sigma^2 = Z = 1, mu = 0)."""
    _require_closed_form(family)
    if phi == 0.0:
        raise OriginAsymptoteError(f"the {family.label} phi marginal diverges at phi = 0")
    u = math.log(abs(phi))
    return _kernel_weighted_scale_density(family, u, rtol) / abs(phi)


def phi_log_axis_density(family: PriorFamily, u: float, rtol: float = 1e-9) -> float:
    """Density of log|phi| at u, restricted to phi > 0 (i.e. e^u pi(e^u))."""
    _require_closed_form(family)
    return _kernel_weighted_scale_density(family, u, rtol)


def phi_normalization(family: PriorFamily, rtol: float = 1e-7) -> float:
    """Integral of the phi marginal over the whole line."""
    spec = QuadratureSpec((-math.inf, math.inf), rtol, 1e-14, max_subdivisions=4000)
    return 2.0 * integrate(
        lambda u: _kernel_weighted_scale_density(family, u, rtol * 1e-2), spec
    )


def phi_interval_mass(
    family: PriorFamily, lo: float, hi: float, rtol: float = 1e-8
) -> float:
    """Prior mass the phi marginal puts on the interval (lo, hi)."""
    _require_closed_form(family)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")

    def positive_part(a: float, b: float) -> float:
        # mass of (a, b) with 0 <= a < b, on the log axis
        inner = lambda u: _kernel_weighted_scale_density(family, u, rtol * 1e-2)
        upper = math.log(b) if math.isfinite(b) else math.inf
        if a == 0.0:
            spec = QuadratureSpec((-math.inf, upper), rtol, 1e-16, max_subdivisions=4000)
            return integrate(inner, spec)
        spec = QuadratureSpec((math.log(a), upper), rtol, 1e-16, max_subdivisions=4000)
        return integrate(inner, spec)

    mass = 0.0
    if hi > 0.0:
        mass += positive_part(max(lo, 0.0), hi)
    if lo < 0.0:
        mass += positive_part(max(-hi, 0.0), -lo)
    return mass


@dataclass(frozen=True)
class PhiMarginal:
    """Phi marginal evaluated on a grid (log-density values)."""

    family: PriorFamily
    grid: np.ndarray
    log_density: np.ndarray

    @classmethod
    def on_grid(cls, family: PriorFamily, grid: Sequence[float]) -> "PhiMarginal":
        g = np.asarray(sorted(grid), dtype=float)
        vals = np.array([math.log(phi_marginal(family, x)) for x in g])
        return cls(family=family, grid=g, log_density=vals)


def marginal_likelihood(family: PriorFamily, y: float, rtol: float = 1e-10) -> float:
    """m(y) = int N(y | 0, 1 + 1/gamma) d pi(gamma), the prior predictive at y."""
    _require_closed_form(family)
    y2 = y * y

    def integrand(v: float) -> float:
        # log-variance of y given gamma = e^v is softplus(-v)
        if v > 0.0:
            lv = math.log1p(math.exp(-v)) if v < 700.0 else 0.0
        else:
            lv = -v + math.log1p(math.exp(v))
        return math.exp(-0.5 * y2 * math.exp(-lv) - 0.5 * lv) * scale_density(family, v)

    points = [0.0]
    if y2 > 1.0:
        points.append(-2.0 * math.log(abs(y)))
    spec = QuadratureSpec((-math.inf, math.inf), rtol, 1e-300, max_subdivisions=4000)
    return integrate(integrand, spec, points=tuple(points)) / _SQRT_2PI


def log_predictive_score(
    family: PriorFamily, y_grid: Sequence[float], rtol: float = 1e-11
) -> np.ndarray:
    """d/dy log m(y) on a grid, by Richardson-extrapolated central differences."""
    out = np.empty(len(y_grid))
    for i, y in enumerate(y_grid):
        h = max(1e-4, 1e-6 * abs(y))
        lm = lambda t: math.log(marginal_likelihood(family, t, rtol))
        out[i] = (8.0 * (lm(y + h) - lm(y - h)) - (lm(y + 2 * h) - lm(y - 2 * h))) / (12.0 * h)
    return out


@dataclass(frozen=True)
class TheoremTwoBound:
    """Incomplete-gamma sandwich expression between the HS+ and HTHS+ phi marginals."""

    a: float
    phi: float
    value: float


def theorem2_bound(a: float, phi: float) -> float:
    """Evaluate the incomplete-gamma bound expression at (a, phi), a in (0, 1/2)."""
    if not 0.0 < a < 0.5:
        raise ValueError(f"a must lie in (0, 0.5), got {a}")
    if phi == 0.0:
        raise ValueError("the bound expression is undefined at phi = 0")
    ap = abs(phi)
    half_sq = 0.5 * phi * phi
    lower = incomplete_gamma(0.5 + a, half_sq).lower
    upper = incomplete_gamma(0.5 - a, half_sq).upper
    sqrt_pi = math.sqrt(math.pi)
    t1 = a * 2.0 ** (a - 1.0) / (sqrt_pi * ap ** (1.0 + 2.0 * a)) * lower
    t2 = a * 2.0 ** (-a - 1.0) / (sqrt_pi * ap ** (1.0 - 2.0 * a)) * upper
    return t1 + t2


class MassUnderflowError(ArithmeticError):
    """The prior interval mass underflowed; the risk bound cannot be formed."""


def kl_risk_bound(family: PriorFamily, phi0: float, n: int, rtol: float = 1e-8) -> float:
    """Cesaro-average predictive-risk upper bound eps - log(pi(A_eps)) / n.

    With unit sampling variance the KL ball {phi : KL < eps} is the interval
    of half-width sqrt(2 eps) around phi0; eps = 1/n.
    """
    if n < 1:
        raise ValueError(f"n must be a positive count, got {n}")
    eps = 1.0 / n
    delta = math.sqrt(2.0 * eps)
    mass = phi_interval_mass(family, phi0 - delta, phi0 + delta, rtol)
    if mass <= 0.0:
        raise MassUnderflowError(
            f"prior mass of ({phi0 - delta}, {phi0 + delta}) underflowed for {family.label}"
        )
    return eps - math.log(mass) / n


@dataclass(frozen=True)
class RiskBoundCurve:
    """kl_risk_bound traced over a grid of sample sizes (eps = 1/n)."""

    family: PriorFamily
    n_grid: np.ndarray
    values: np.ndarray
    phi0: float = 0.0

    @classmethod
    def trace(cls, family: PriorFamily, n_grid: Sequence[int], phi0: float = 0.0) -> "RiskBoundCurve":
        ns = np.asarray(sorted(int(n) for n in n_grid))
        vals = np.array([kl_risk_bound(family, phi0, int(n)) for n in ns])
        return cls(family=family, n_grid=ns, values=vals, phi0=phi0)


def figure_rows(kind: str, families: Sequence[PriorFamily], xs: Sequence[float]):
    """(family, x, value, curve-label) rows behind the density/score figures."""
    rows = []
    for fam in families:
        for x in xs:
            if kind == "phi":
                val = phi_marginal(fam, x)
            elif kind == "marginal_likelihood":
                val = marginal_likelihood(fam, x)
            elif kind == "log_predictive_score":
                val = float(log_predictive_score(fam, [x])[0])
            else:
                raise ValueError(f"unknown figure kind {kind!r}")
            rows.append((fam.label, x, val, kind))
    return rows


def write_figure_csv(path, rows, header_comment: str | None = None) -> None:
    """CSV with columns (family, x, value, curve); full round-trip precision."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        fh.write("family,x,value,curve\n")
        for family, x, value, curve in rows:
            fh.write(f"{family},{float(x)!r},{float(value)!r},{curve}\n")
