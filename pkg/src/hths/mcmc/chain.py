"""Chain execution, retained-draw storage and posterior summaries."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..families import PriorFamily
from .kernels import (
    FAMILY_HS,
    FAMILY_HS_PLUS,
    FAMILY_HTHS,
    FAMILY_HTHS_LAMBDA,
    FAMILY_HTHS_PLUS,
    gibbs_sweep_kernel,
)
from .state import ChainConfig, FixedGlobals, GlobalPriors, PosteriorSummary, initial_state

FAMILY_CODES = {
    PriorFamily.HS: FAMILY_HS,
    PriorFamily.HS_PLUS: FAMILY_HS_PLUS,
    PriorFamily.HTHS: FAMILY_HTHS,
    PriorFamily.HTHS_PLUS: FAMILY_HTHS_PLUS,
    PriorFamily.HTHS_LAMBDA: FAMILY_HTHS_LAMBDA,
}

# families whose sweep updates the decision parameter p
_P_FAMILIES = (PriorFamily.HTHS, PriorFamily.HTHS_LAMBDA)


class DivergedChainError(RuntimeError):
    """A scale parameter left [1e-300, 1e300] during the sweep."""

    def __init__(self, iteration: int):
        super().__init__(f"chain diverged at iteration {iteration}")
        self.iteration = iteration


@dataclass
class DrawStore:
    """Retained post-burn-in draws, one row per kept sweep."""

    family: PriorFamily
    y: np.ndarray
    config: ChainConfig
    priors: GlobalPriors
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def retained(self) -> int:
        return self.columns["phi"].shape[0]

    @property
    def n(self) -> int:
        return self.columns["phi"].shape[1]


def lower_median(draws: np.ndarray, axis: int = 0) -> np.ndarray | float:
    """Order-statistic median; for even counts, the lower of the two middles."""
    srt = np.sort(draws, axis=axis)
    idx = (srt.shape[axis] - 1) // 2
    return np.take(srt, idx, axis=axis)


def effective_sample_size(draws: np.ndarray) -> float:
    """ESS from the initial monotone sequence of paired autocorrelations."""
    x = np.asarray(draws, dtype=float)
    m = x.size
    if m < 4:
        return float(m)
    x = x - x.mean()
    var0 = float(np.dot(x, x)) / m
    if var0 == 0.0:
        return float(m)
    nfft = 1 << (2 * m - 1).bit_length()
    spec = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[:m].real / m
    rho = acov / acov[0]
    total = 0.0
    prev = math.inf
    for k in range(m // 2):
        pair = rho[2 * k] + rho[2 * k + 1]
        if pair <= 0.0:
            break
        if pair > prev:
            pair = prev
        prev = pair
        total += pair
    iact = max(2.0 * total - 1.0, 1.0)
    return float(min(m, m / iact))


def run_chain(
    y,
    family: PriorFamily,
    priors: GlobalPriors | None = None,
    config: ChainConfig | None = None,
) -> tuple[PosteriorSummary, DrawStore]:
    """Run one seeded Gibbs chain and return summaries plus retained draws."""
    y = np.ascontiguousarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] < 1:
        raise ValueError("data must be a nonempty 1-d sequence")
    priors = priors or GlobalPriors()
    config = config or ChainConfig()
    n = y.shape[0]
    fixed = config.fixed_globals

    state = initial_state(y, fixed)
    rng = np.random.default_rng(config.seed)
    fam_code = FAMILY_CODES[family]

    globals_vec = np.array([state.mu, state.sigma2, state.z])
    prior_vec = np.array(
        [
            priors.mu_mean,
            priors.mu_scale_multiplier,
            priors.sigma2_shape,
            priors.sigma2_rate,
            priors.z_shape,
            priors.z_rate,
        ]
    )
    fix_vec = np.array(
        [fixed.mu is not None, fixed.sigma2 is not None, fixed.z is not None],
        dtype=np.int64,
    )
    counters = np.zeros(1, dtype=np.int64)

    keep = config.retained
    cols: dict[str, np.ndarray] = {
        "phi": np.empty((keep, n)),
        "gamma": np.empty((keep, n)),
        "mu": np.empty(keep),
        "sigma2": np.empty(keep),
        "z": np.empty(keep),
    }
    if family in _P_FAMILIES:
        cols["p"] = np.empty((keep, n))
    if family is PriorFamily.HTHS_LAMBDA:
        cols["lam"] = np.empty((keep, n))
        cols["xi"] = np.empty((keep, n))

    row = 0
    for it in range(config.iterations):
        status = gibbs_sweep_kernel(
            rng,
            fam_code,
            y,
            globals_vec,
            state.phi,
            state.gamma,
            state.omega,
            state.p,
            state.lam,
            state.xi,
            state.aux_a,
            state.aux_b,
            prior_vec,
            fix_vec,
            config.slice_width,
            1,
            counters,
        )
        if status != 0:
            raise DivergedChainError(it)
        if it >= config.burn_in and (it - config.burn_in) % config.thinning == 0:
            cols["phi"][row] = state.phi
            cols["gamma"][row] = state.gamma
            cols["mu"][row] = globals_vec[0]
            cols["sigma2"][row] = globals_vec[1]
            cols["z"][row] = globals_vec[2]
            if "p" in cols:
                cols["p"][row] = state.p
            if "lam" in cols:
                cols["lam"][row] = state.lam
                cols["xi"][row] = state.xi
            row += 1

    store = DrawStore(family=family, y=y, config=config, priors=priors, columns=cols)
    summary = summarize(store, slice_evaluations=int(counters[0]))
    return summary, store


def summarize(store: DrawStore, slice_evaluations: int = 0) -> PosteriorSummary:
    phi = store.columns["phi"]
    lo, hi = np.quantile(phi, [0.025, 0.975], axis=0)
    med = lower_median(phi, axis=0)
    ess = np.array([effective_sample_size(phi[:, i]) for i in range(phi.shape[1])])

    def scalar_stats(name: str) -> tuple[float, float, float]:
        d = store.columns[name]
        qlo, qhi = np.quantile(d, [0.025, 0.975])
        return float(lower_median(d)), float(qlo), float(qhi)

    mu_med, mu_lo, mu_hi = scalar_stats("mu")
    s2_med, s2_lo, s2_hi = scalar_stats("sigma2")
    z_med, z_lo, z_hi = scalar_stats("z")
    return PosteriorSummary(
        family=store.family,
        n=store.n,
        retained=store.retained,
        phi_median=med,
        phi_lower=lo,
        phi_upper=hi,
        phi_ess=ess,
        mu_median=mu_med,
        mu_lower=mu_lo,
        mu_upper=mu_hi,
        sigma2_median=s2_med,
        sigma2_lower=s2_lo,
        sigma2_upper=s2_hi,
        z_median=z_med,
        z_lower=z_lo,
        z_upper=z_hi,
        slice_evaluations=slice_evaluations,
    )


def rao_blackwell_shrinkage(store: DrawStore, y=None) -> np.ndarray:
    """Posterior-mean shrinkage profile E[tau_i | y] from retained gamma draws.

    Only meaningful when the shrinkage factor is gamma/(1+gamma), i.e. with Z
    pinned to 1; refuses stores where Z was sampled.
    """
    fixed = store.config.fixed_globals
    if fixed.z != 1.0:
        raise ValueError(
            "the shrinkage identity needs Z pinned to 1; this store sampled Z "
            f"or pinned it elsewhere (z={fixed.z})"
        )
    gamma = store.columns["gamma"]
    tau = gamma / (1.0 + gamma)
    return tau.mean(axis=0)
