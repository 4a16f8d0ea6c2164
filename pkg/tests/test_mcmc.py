"""Gibbs sampler: conditional correctness, stationarity, summaries, storage."""
import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from hths.families import PriorFamily
from hths.mcmc import (
    ChainConfig,
    FixedGlobals,
    GlobalPriors,
    PosteriorSummary,
    effective_sample_size,
    initial_state,
    load_store,
    lower_median,
    rao_blackwell_shrinkage,
    run_chain,
    save_store,
    summarize,
)
from hths.mcmc.kernels import FAMILY_HS, _slice_log_gamma, _slice_p, gibbs_sweep_kernel

PINNED = FixedGlobals(mu=0.0, sigma2=1.0, z=1.0)


def _sweep_args(y, priors=None):
    priors = priors or GlobalPriors()
    state = initial_state(y, PINNED)
    globals_vec = np.array([0.0, 1.0, 1.0])
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
    fix_vec = np.ones(3, dtype=np.int64)
    counters = np.zeros(1, dtype=np.int64)
    return state, globals_vec, prior_vec, fix_vec, counters


def _run_sweeps(rng, family_code, y, state, globals_vec, prior_vec, fix_vec, counters,
                with_likelihood=1, slice_width=2.0):
    return gibbs_sweep_kernel(
        rng,
        family_code,
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
        slice_width,
        with_likelihood,
        counters,
    )


def test_phi_conditional_moments():
    # with y - mu = 2, gamma Z = 3, sigma2 = 1 the phi conditional is
    # N(0.5, 0.25); gamma is re-pinned before every sweep
    y = np.array([2.0])
    state, gv, pv, fv, counters = _sweep_args(y)
    rng = np.random.default_rng(1)
    draws = np.empty(20_000)
    for k in range(draws.size):
        state.gamma[0] = 3.0
        state.omega[0] = 1.0
        assert _run_sweeps(rng, FAMILY_HS, y, state, gv, pv, fv, counters) == 0
        draws[k] = state.phi[0]
    assert draws.mean() == pytest.approx(0.5, abs=4.0 * 0.5 / math.sqrt(draws.size))
    assert draws.var() == pytest.approx(0.25, rel=0.05)


def test_gamma_conditional_is_conjugate_gamma():
    # given the freshly drawn phi and re-pinned omega = 1, the HS update is
    # Gamma(1, 1 + phi^2/2); its probability transform must be uniform
    y = np.array([1.0])
    state, gv, pv, fv, counters = _sweep_args(y)
    rng = np.random.default_rng(2)
    pit = np.empty(8_000)
    for k in range(pit.size):
        state.omega[0] = 1.0
        assert _run_sweeps(rng, FAMILY_HS, y, state, gv, pv, fv, counters) == 0
        rate = 1.0 + 0.5 * state.phi[0] ** 2
        pit[k] = -math.expm1(-rate * state.gamma[0])
    assert stats.kstest(pit, stats.uniform.cdf).pvalue > 1e-3


def test_slice_p_symmetric_target():
    # gamma = 1 and lambda = 1 leave the p conditional proportional to
    # sin(pi p), mean one half
    rng = np.random.default_rng(3)
    counters = np.zeros(1, dtype=np.int64)
    p = 0.5
    draws = np.empty(30_000)
    for k in range(draws.size):
        p = _slice_p(rng, p, 0.0, 0.0, 2.0, counters)
        draws[k] = p
    assert draws.mean() == pytest.approx(0.5, abs=0.005)
    thinned = draws[::10]
    cdf = lambda t: 0.5 * (1.0 - np.cos(np.pi * np.clip(t, 0.0, 1.0)))
    assert stats.kstest(thinned, cdf).pvalue > 1e-4
    assert counters[0] > draws.size


def test_slice_p_with_lambda_tilt():
    # lambda != 1 tilts the target by p^(lambda - 1); compare the chain
    # against the numerically normalized conditional
    log_gamma, lam = 0.3, 2.5

    def target(t):
        return math.sin(math.pi * t) * math.exp(t * log_gamma) * t ** (lam - 1.0)

    norm, _ = quad(target, 0.0, 1.0)
    grid = np.linspace(0.0, 1.0, 2001)
    pdf = np.array([target(t) for t in grid]) / norm
    cdf_grid = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * 0.5 * np.diff(grid))])

    rng = np.random.default_rng(4)
    counters = np.zeros(1, dtype=np.int64)
    p = 0.5
    draws = np.empty(30_000)
    for k in range(draws.size):
        p = _slice_p(rng, p, log_gamma, lam - 1.0, 2.0, counters)
        draws[k] = p
    thinned = draws[::10]
    assert stats.kstest(thinned, lambda t: np.interp(t, grid, cdf_grid)).pvalue > 1e-4


def test_slice_log_gamma_matches_target():
    c = 0.5

    def target(u):
        return math.exp(0.5 * u - c * math.exp(u)) / (u * u + 4.0 * math.pi ** 2)

    grid = np.linspace(-40.0, 10.0, 4001)
    pdf = np.array([target(u) for u in grid])
    cdf_grid = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * 0.5 * np.diff(grid))])
    cdf_grid /= cdf_grid[-1]

    rng = np.random.default_rng(5)
    counters = np.zeros(1, dtype=np.int64)
    u = 0.0
    draws = np.empty(30_000)
    for k in range(draws.size):
        u = _slice_log_gamma(rng, u, c, 2.0, counters)
        draws[k] = u
    thinned = draws[::10]
    assert stats.kstest(thinned, lambda t: np.interp(t, grid, cdf_grid)).pvalue > 1e-4


@pytest.mark.parametrize(
    "family,cdf",
    [
        (PriorFamily.HTHS, lambda u: 0.5 + np.arctan(u / np.pi) / np.pi),
        (PriorFamily.HTHS_PLUS, lambda u: 0.5 + np.arctan(u / (2.0 * np.pi)) / np.pi),
    ],
)
def test_prior_stationarity_without_likelihood(family, cdf):
    # with the data factor disabled and globals pinned, the chain's gamma
    # marginal is the closed-form log-Cauchy; heavy thinning is needed
    # because the scale coordinate mixes as a random walk through its tails
    from hths.mcmc import FAMILY_CODES

    y = np.zeros(2)
    state, gv, pv, fv, counters = _sweep_args(y)
    rng = np.random.default_rng(6)
    thin, kept, burn = 300, 400, 2_000
    code = FAMILY_CODES[family]
    for _ in range(burn):
        assert _run_sweeps(rng, code, y, state, gv, pv, fv, counters, with_likelihood=0) == 0
    draws = np.empty(kept)
    for k in range(kept):
        for _ in range(thin):
            assert _run_sweeps(rng, code, y, state, gv, pv, fv, counters, with_likelihood=0) == 0
        draws[k] = math.log(state.gamma[0])
    assert stats.kstest(draws, cdf).pvalue > 0.01


def test_run_chain_is_deterministic():
    y = np.array([0.3, -1.2, 5.0, 0.0, 2.2])
    cfg = ChainConfig(iterations=400, burn_in=100, thinning=2, seed=9)
    s1, store1 = run_chain(y, PriorFamily.HTHS, config=cfg)
    s2, store2 = run_chain(y, PriorFamily.HTHS, config=cfg)
    for name in store1.columns:
        assert np.array_equal(store1.columns[name], store2.columns[name])
    assert np.array_equal(s1.phi_median, s2.phi_median)
    s3, _ = run_chain(y, PriorFamily.HTHS, config=ChainConfig(400, 100, 2, seed=10))
    assert not np.array_equal(s1.phi_median, s3.phi_median)


def test_run_chain_validates_input():
    with pytest.raises(ValueError):
        run_chain(np.zeros((2, 2)), PriorFamily.HS)
    with pytest.raises(ValueError):
        run_chain(np.array([]), PriorFamily.HS)


def test_retained_draw_counts_and_columns():
    y = np.array([1.0, 2.0])
    cfg = ChainConfig(iterations=105, burn_in=5, thinning=10, seed=0)
    _, store = run_chain(y, PriorFamily.HTHS_LAMBDA, config=cfg)
    assert store.retained == cfg.retained == 10
    assert set(store.columns) == {"phi", "gamma", "mu", "sigma2", "z", "p", "lam", "xi"}
    _, store_hs = run_chain(y, PriorFamily.HS, config=cfg)
    assert set(store_hs.columns) == {"phi", "gamma", "mu", "sigma2", "z"}


def test_big_signal_barely_shrunk():
    cfg = ChainConfig(iterations=4_000, burn_in=1_000, thinning=1, seed=12,
                      fixed_globals=PINNED)
    summary, _ = run_chain(np.array([20.0]), PriorFamily.HTHS, config=cfg)
    assert 18.0 < summary.phi_median[0] < 20.0


def test_posterior_shrinkage_at_null_and_rb_identity():
    cfg = ChainConfig(iterations=30_000, burn_in=5_000, thinning=5, seed=13,
                      fixed_globals=PINNED)
    for y0, tau_oracle in ((0.0, 0.7551126), (3.0, 0.2638272)):
        summary, store = run_chain(np.array([y0]), PriorFamily.HTHS, config=cfg)
        tau_draws = store.columns["gamma"][:, 0] / (1.0 + store.columns["gamma"][:, 0])
        rb = rao_blackwell_shrinkage(store)
        assert rb[0] == pytest.approx(tau_draws.mean())
        se = tau_draws.std(ddof=1) / math.sqrt(effective_sample_size(tau_draws))
        assert abs(rb[0] - tau_oracle) < 3.0 * se
        if y0 == 0.0:
            assert rb[0] > 0.5
        else:
            # shrinkage identity: (1 - E[tau|y]) y equals the posterior mean
            phi_draws = store.columns["phi"][:, 0]
            lhs = (1.0 - tau_draws) * y0
            se_pair = math.sqrt(
                lhs.std(ddof=1) ** 2 / effective_sample_size(lhs)
                + phi_draws.std(ddof=1) ** 2 / effective_sample_size(phi_draws)
            )
            assert abs(lhs.mean() - phi_draws.mean()) < 3.0 * se_pair


def test_rao_blackwell_requires_pinned_z():
    y = np.array([1.0])
    cfg = ChainConfig(iterations=120, burn_in=20, thinning=1, seed=0)
    _, store = run_chain(y, PriorFamily.HS, config=cfg)
    with pytest.raises(ValueError, match="pinned"):
        rao_blackwell_shrinkage(store)


def test_store_round_trip(tmp_path):
    y = np.array([0.5, -2.0, 4.0])
    cfg = ChainConfig(iterations=300, burn_in=100, thinning=2, seed=21,
                      fixed_globals=FixedGlobals(z=1.0))
    _, store = run_chain(y, PriorFamily.HTHS_LAMBDA, config=cfg)
    path = tmp_path / "draws.hths"
    save_store(path, store)
    loaded = load_store(path)
    assert loaded.family is store.family
    assert loaded.config == store.config
    assert loaded.priors == store.priors
    assert np.array_equal(loaded.y, store.y)
    assert set(loaded.columns) == set(store.columns)
    for name in store.columns:
        assert np.array_equal(loaded.columns[name], store.columns[name])


def test_store_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"not a draw store at all")
    with pytest.raises(ValueError, match="magic"):
        load_store(path)


def test_summaries_reproducible_from_store():
    y = np.array([1.0, -1.0])
    cfg = ChainConfig(iterations=500, burn_in=100, thinning=2, seed=3)
    summary, store = run_chain(y, PriorFamily.HS, config=cfg)
    again = summarize(store, slice_evaluations=summary.slice_evaluations)
    assert np.array_equal(summary.phi_median, again.phi_median)
    assert summary.mu_median == again.mu_median


def test_lower_median_convention():
    assert lower_median(np.array([4.0, 1.0, 3.0, 2.0])) == 2.0
    assert lower_median(np.array([3.0, 1.0, 2.0])) == 2.0


def test_effective_sample_size_behaviour():
    rng = np.random.default_rng(17)
    iid = rng.standard_normal(4_000)
    assert 2_000 < effective_sample_size(iid) <= 4_000
    ar = np.empty(4_000)
    ar[0] = 0.0
    for k in range(1, ar.size):
        ar[k] = 0.97 * ar[k - 1] + rng.standard_normal()
    assert effective_sample_size(ar) < 400
    assert effective_sample_size(np.ones(100)) == 100.0


def test_config_and_state_validation():
    with pytest.raises(ValueError):
        ChainConfig(iterations=10, burn_in=10)
    with pytest.raises(ValueError):
        ChainConfig(thinning=0)
    with pytest.raises(ValueError):
        FixedGlobals(sigma2=-1.0)
    with pytest.raises(ValueError):
        GlobalPriors(z_shape=0.0)
    state = initial_state(np.array([1.0, 2.0]))
    state.validate()
    state.gamma[0] = -1.0
    with pytest.raises(ValueError, match="gamma"):
        state.validate()


def test_posterior_summary_invariants():
    y = np.array([0.0])
    cfg = ChainConfig(iterations=300, burn_in=100, thinning=1, seed=1)
    summary, _ = run_chain(y, PriorFamily.HS, config=cfg)
    assert np.all(summary.phi_lower <= summary.phi_median)
    assert np.all(summary.phi_median <= summary.phi_upper)
    assert np.all(summary.phi_ess <= summary.retained)
    assert summary.slice_evaluations == 0
    kwargs = {f: getattr(summary, f) for f in summary.__dataclass_fields__}
    kwargs["phi_lower"] = summary.phi_upper + 1.0
    with pytest.raises(ValueError, match="order"):
        PosteriorSummary(**kwargs)


def test_slice_evaluation_counter_active_for_slice_families():
    y = np.array([1.0])
    cfg = ChainConfig(iterations=200, burn_in=50, thinning=1, seed=2)
    summary, _ = run_chain(y, PriorFamily.HTHS_PLUS, config=cfg)
    assert summary.slice_evaluations > 0
