"""Single-source Gibbs sweep kernel, compiled with numba when enabled.

The sweep mutates flat float64 arrays in place; all model structure that the
kernel needs (family, pins, hyperparameters) arrives as plain scalars and
small arrays so the same code path runs compiled or interpreted.
"""
from __future__ import annotations

import math

import numpy as np

from ..backend import maybe_njit
from ..variates import gamma_variate

FAMILY_HS = 0
FAMILY_HS_PLUS = 1
FAMILY_HTHS = 2
FAMILY_HTHS_PLUS = 3
FAMILY_HTHS_LAMBDA = 4

# indices into the counters array
COUNTER_SLICE_EVALS = 0

_TWO_PI_SQ4 = 4.0 * math.pi * math.pi
_SCALE_FLOOR = 1e-300
_SCALE_CEIL = 1e300
_MAX_STEP_OUT = 100
_MAX_SHRINK = 1000


@maybe_njit
def _log_target_p(p: float, log_gamma: float, lam_minus_one: float) -> float:
    """Unnormalized log conditional of the decision parameter."""
    if p <= 0.0 or p >= 1.0:
        return -math.inf
    val = math.log(math.sin(math.pi * p)) + p * log_gamma
    if lam_minus_one != 0.0:
        val += lam_minus_one * math.log(p)
    return val


@maybe_njit
def _slice_p(rng, p0: float, log_gamma: float, lam_minus_one: float, width: float, counters) -> float:
    """One slice-sampling update of p on (0, 1): stepping out, then shrinkage."""
    u = rng.random()
    while u <= 0.0:
        u = rng.random()
    level = _log_target_p(p0, log_gamma, lam_minus_one) + math.log(u)
    counters[COUNTER_SLICE_EVALS] += 1

    left = p0 - width * rng.random()
    right = left + width
    steps = 0
    while left > 0.0 and steps < _MAX_STEP_OUT:
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_p(left, log_gamma, lam_minus_one) <= level:
            break
        left -= width
        steps += 1
    steps = 0
    while right < 1.0 and steps < _MAX_STEP_OUT:
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_p(right, log_gamma, lam_minus_one) <= level:
            break
        right += width
        steps += 1
    if left < 0.0:
        left = 0.0
    if right > 1.0:
        right = 1.0

    for _ in range(_MAX_SHRINK):
        cand = left + rng.random() * (right - left)
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_p(cand, log_gamma, lam_minus_one) > level:
            return cand
        if cand < p0:
            left = cand
        else:
            right = cand
    return p0


@maybe_njit
def _log_target_u(u: float, c: float) -> float:
    """Unnormalized log conditional of log(gamma) for the log-Cauchy-plus family.

    The prior contributes -log(u^2 + 4 pi^2); the Gaussian factor of phi
    given gamma contributes u/2 - c e^u with c = Z phi^2 / (2 sigma^2).
    """
    log_pen = math.log(c) + u
    if log_pen > 700.0:
        return -math.inf
    pen = math.exp(log_pen) if log_pen > -745.0 else 0.0
    return -math.log(u * u + _TWO_PI_SQ4) + 0.5 * u - pen


@maybe_njit
def _slice_log_gamma(rng, u0: float, c: float, width: float, counters) -> float:
    """One slice update of u = log(gamma), stepping out on the whole line."""
    w = rng.random()
    while w <= 0.0:
        w = rng.random()
    level = _log_target_u(u0, c) + math.log(w)
    counters[COUNTER_SLICE_EVALS] += 1

    left = u0 - width * rng.random()
    right = left + width
    # Neal's bounded stepping out with a random budget split keeps the
    # transition reversible when a cap is hit
    j = int(_MAX_STEP_OUT * rng.random())
    k = _MAX_STEP_OUT - 1 - j
    while j > 0:
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_u(left, c) <= level:
            break
        left -= width
        j -= 1
    while k > 0:
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_u(right, c) <= level:
            break
        right += width
        k -= 1

    for _ in range(_MAX_SHRINK):
        cand = left + rng.random() * (right - left)
        counters[COUNTER_SLICE_EVALS] += 1
        if _log_target_u(cand, c) > level:
            return cand
        if cand < u0:
            left = cand
        else:
            right = cand
    return u0


@maybe_njit
def gibbs_sweep_kernel(
    rng,
    family: int,
    y,
    globals_vec,
    phi,
    gamma,
    omega,
    p,
    lam,
    xi,
    aux_a,
    aux_b,
    prior_vec,
    fix_vec,
    slice_width: float,
    with_likelihood: int,
    counters,
) -> int:
    """One systematic-scan Gibbs sweep over all unpinned coordinates.

    ``globals_vec`` is [mu, sigma2, z], updated in place; ``prior_vec`` is
    [mu_mean, mu_mult, s2_shape, s2_rate, z_shape, z_rate]; ``fix_vec`` is
    [fix_mu, fix_sigma2, fix_z] as 0/1 flags.  ``with_likelihood == 0``
    replaces the phi conditional by its prior, leaving the gamma hierarchy
    targeting the prior joint.  Returns 0, or 1 on a diverged scale.
    """
    n = y.shape[0]
    mu = globals_vec[0]
    s2 = globals_vec[1]
    z = globals_vec[2]

    for i in range(n):
        denom = 1.0 + gamma[i] * z
        if with_likelihood != 0:
            mean = (y[i] - mu) / denom
            sd = math.sqrt(s2 / denom)
        else:
            mean = 0.0
            sd = math.sqrt(s2 / (gamma[i] * z))
        phi[i] = mean + sd * rng.standard_normal()

        # the phi-given-gamma factor belongs to the prior joint, so c stays
        # in play even when the data likelihood is disabled
        c = z * phi[i] * phi[i] / (2.0 * s2)

        if family == FAMILY_HS:
            gamma[i] = gamma_variate(rng, 1.0, omega[i] + c)
            omega[i] = gamma_variate(rng, 1.0, 1.0 + gamma[i])
        elif family == FAMILY_HS_PLUS:
            gamma[i] = gamma_variate(rng, 1.0, omega[i] + c)
            omega[i] = gamma_variate(rng, 1.0, gamma[i] + aux_a[i])
            aux_a[i] = gamma_variate(rng, 1.0, omega[i] + aux_b[i])
            aux_b[i] = gamma_variate(rng, 1.0, aux_a[i] + 1.0)
        elif family == FAMILY_HTHS or family == FAMILY_HTHS_LAMBDA:
            gamma[i] = gamma_variate(rng, p[i] + 0.5, omega[i] + c)
            omega[i] = gamma_variate(rng, 1.0, 1.0 + gamma[i])
            lam_minus_one = lam[i] - 1.0 if family == FAMILY_HTHS_LAMBDA else 0.0
            p[i] = _slice_p(rng, p[i], math.log(gamma[i]), lam_minus_one, slice_width, counters)
            if family == FAMILY_HTHS_LAMBDA:
                lam[i] = gamma_variate(rng, 2.0, xi[i] - math.log(p[i]))
                xi[i] = gamma_variate(rng, 2.0, 1.0 + lam[i])
        else:
            c_floor = c if c > _SCALE_FLOOR else _SCALE_FLOOR
            u1 = _slice_log_gamma(rng, math.log(gamma[i]), c_floor, slice_width, counters)
            if u1 > 690.0 or u1 < -690.0:
                return 1
            gamma[i] = math.exp(u1)

        if not (gamma[i] >= _SCALE_FLOOR and gamma[i] <= _SCALE_CEIL):
            return 1
        if not (omega[i] >= _SCALE_FLOOR and omega[i] <= _SCALE_CEIL):
            return 1
        if not np.isfinite(phi[i]):
            return 1

    sum_resid = 0.0
    sum_gamma_phi2 = 0.0
    for i in range(n):
        sum_resid += y[i] - phi[i]
        sum_gamma_phi2 += gamma[i] * phi[i] * phi[i]

    mu_mean = prior_vec[0]
    mu_mult = prior_vec[1]

    if fix_vec[0] == 0:
        prec = n + 1.0 / mu_mult
        mu = (sum_resid + mu_mean / mu_mult) / prec + math.sqrt(s2 / prec) * rng.standard_normal()

    if fix_vec[1] == 0:
        sse = 0.0
        for i in range(n):
            r = y[i] - mu - phi[i]
            sse += r * r
        dev = mu - mu_mean
        # likelihood contributes n/2, the phi prior n/2, the mu prior 1/2
        shape = prior_vec[2] + n + 0.5
        rate = prior_vec[3] + 0.5 * sse + 0.5 * z * sum_gamma_phi2 + dev * dev / (2.0 * mu_mult)
        s2 = rate / gamma_variate(rng, shape, 1.0)

    if fix_vec[2] == 0:
        z = gamma_variate(rng, prior_vec[4] + 0.5 * n, prior_vec[5] + sum_gamma_phi2 / (2.0 * s2))

    if not (np.isfinite(mu) and s2 >= _SCALE_FLOOR and s2 <= _SCALE_CEIL):
        return 1
    if not (z >= _SCALE_FLOOR and z <= _SCALE_CEIL):
        return 1

    globals_vec[0] = mu
    globals_vec[1] = s2
    globals_vec[2] = z
    return 0
