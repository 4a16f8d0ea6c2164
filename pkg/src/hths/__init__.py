"""Heavy-tailed horseshoe shrinkage priors for sparse normal means.

Closed-form prior densities of the local scales, a Gibbs/slice posterior
sampler for five prior families, numerical phi-marginal and risk-bound
machinery, and a simulation benchmark, all behind one CLI (``hths``).
"""
from .backend import NUMBA_ENABLED, backend_name
from .densities import (
    UnsupportedFamilyError,
    density_gamma,
    density_p,
    density_tau,
    log_density_gamma,
    sample_gamma_hierarchy,
    sample_gamma_marginal,
    scale_density,
)
from .families import ALL_FAMILIES, CLOSED_FORM_FAMILIES, LocalScale, PriorFamily
from .mcmc import (
    ChainConfig,
    DivergedChainError,
    DrawStore,
    FixedGlobals,
    GlobalPriors,
    PosteriorSummary,
    load_store,
    rao_blackwell_shrinkage,
    run_chain,
    save_store,
)
from .quadrature import QuadratureError, QuadratureSpec, integrate
from .risk import (
    MassUnderflowError,
    OriginAsymptoteError,
    kl_risk_bound,
    log_predictive_score,
    marginal_likelihood,
    phi_interval_mass,
    phi_marginal,
    theorem2_bound,
)
from .sim import SimulationDesign, SimulationReport, evaluate_models, generate_data, oracle_estimate
from .special import incomplete_gamma, regularized_lower

__version__ = "0.1.0"

__all__ = [
    "ALL_FAMILIES",
    "CLOSED_FORM_FAMILIES",
    "ChainConfig",
    "DivergedChainError",
    "DrawStore",
    "FixedGlobals",
    "GlobalPriors",
    "LocalScale",
    "MassUnderflowError",
    "NUMBA_ENABLED",
    "OriginAsymptoteError",
    "PosteriorSummary",
    "PriorFamily",
    "QuadratureError",
    "QuadratureSpec",
    "SimulationDesign",
    "SimulationReport",
    "UnsupportedFamilyError",
    "backend_name",
    "density_gamma",
    "density_p",
    "density_tau",
    "evaluate_models",
    "generate_data",
    "incomplete_gamma",
    "integrate",
    "kl_risk_bound",
    "load_store",
    "log_density_gamma",
    "log_predictive_score",
    "marginal_likelihood",
    "oracle_estimate",
    "phi_interval_mass",
    "phi_marginal",
    "rao_blackwell_shrinkage",
    "regularized_lower",
    "run_chain",
    "sample_gamma_hierarchy",
    "sample_gamma_marginal",
    "save_store",
    "scale_density",
    "theorem2_bound",
]
