"""Dataclasses carrying the sampler's configuration and state.

The per-observation parameter blocks are plain float64 arrays so the sweep
kernel can run unchanged under numba or pure numpy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..families import PriorFamily


@dataclass(frozen=True)
class GlobalPriors:
    """Hyperparameters of the normal / inverse-gamma / gamma global priors.

    The location prior is normal with mean ``mu_mean`` and variance
    ``mu_scale_multiplier * sigma2``; the variance prior is inverse-gamma
    (shape, rate); the global precision multiplier Z has a gamma prior.
    """

    mu_mean: float = 0.0
    mu_scale_multiplier: float = 100.0
    sigma2_shape: float = 0.001
    sigma2_rate: float = 0.001
    z_shape: float = 0.5
    z_rate: float = 0.5

    def __post_init__(self) -> None:
        for name in ("mu_scale_multiplier", "sigma2_shape", "sigma2_rate", "z_shape", "z_rate"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class FixedGlobals:
    """Optional pins for the global parameters; None means sampled."""

    mu: float | None = None
    sigma2: float | None = None
    z: float | None = None

    def __post_init__(self) -> None:
        if self.sigma2 is not None and not self.sigma2 > 0.0:
            raise ValueError(f"pinned sigma2 must be positive, got {self.sigma2}")
        if self.z is not None and not self.z > 0.0:
            raise ValueError(f"pinned z must be positive, got {self.z}")

    @property
    def any_fixed(self) -> bool:
        return self.mu is not None or self.sigma2 is not None or self.z is not None


@dataclass(frozen=True)
class ChainConfig:
    """Chain-length and reproducibility contract for :func:`run_chain`.

    ``iterations`` counts total Gibbs sweeps; retained draws are the
    post-burn-in sweeps kept every ``thinning`` steps.
    """

    iterations: int = 55_000
    burn_in: int = 5_000
    thinning: int = 5
    seed: int = 0
    slice_width: float = 2.0
    fixed_globals: FixedGlobals = field(default_factory=FixedGlobals)

    def __post_init__(self) -> None:
        if not self.burn_in >= 0:
            raise ValueError(f"burn_in must be nonnegative, got {self.burn_in}")
        if not self.iterations > self.burn_in:
            raise ValueError(
                f"iterations ({self.iterations}) must exceed burn_in ({self.burn_in})"
            )
        if not self.thinning >= 1:
            raise ValueError(f"thinning must be >= 1, got {self.thinning}")
        if not self.slice_width > 0.0:
            raise ValueError(f"slice_width must be positive, got {self.slice_width}")

    @property
    def retained(self) -> int:
        return (self.iterations - self.burn_in + self.thinning - 1) // self.thinning


@dataclass
class ModelState:
    """One full parameter configuration, the target of a Gibbs sweep."""

    mu: float
    sigma2: float
    z: float
    phi: np.ndarray
    gamma: np.ndarray
    omega: np.ndarray
    p: np.ndarray
    lam: np.ndarray
    xi: np.ndarray
    aux_a: np.ndarray
    aux_b: np.ndarray

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    def validate(self) -> None:
        n = self.n
        arrays = {
            "phi": self.phi,
            "gamma": self.gamma,
            "omega": self.omega,
            "p": self.p,
            "lam": self.lam,
            "xi": self.xi,
            "aux_a": self.aux_a,
            "aux_b": self.aux_b,
        }
        for name, arr in arrays.items():
            if arr.shape != (n,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
        if not self.sigma2 > 0.0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if not self.z > 0.0:
            raise ValueError(f"z must be positive, got {self.z}")
        if not (np.all(self.gamma > 0.0) and np.all(self.omega > 0.0)):
            raise ValueError("gamma and omega must stay strictly positive")
        if not np.all((self.p > 0.0) & (self.p < 1.0)):
            raise ValueError("p must stay inside (0, 1)")
        if not (np.all(self.lam > 0.0) and np.all(self.xi > 0.0)):
            raise ValueError("lam and xi must stay strictly positive")


def initial_state(y: np.ndarray, fixed: FixedGlobals | None = None) -> ModelState:
    """Moment-free starting point: median location, MAD^2 scale, unit scales."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 1:
        raise ValueError("need at least one observation")
    fixed = fixed or FixedGlobals()
    mu = float(np.median(y)) if fixed.mu is None else fixed.mu
    mad = float(np.median(np.abs(y - np.median(y))))
    sigma2 = max(mad * mad, 1e-12) if fixed.sigma2 is None else fixed.sigma2
    z = 1.0 if fixed.z is None else fixed.z
    ones = np.ones(n)
    return ModelState(
        mu=mu,
        sigma2=sigma2,
        z=z,
        phi=np.zeros(n),
        gamma=ones.copy(),
        omega=ones.copy(),
        p=np.full(n, 0.5),
        lam=ones.copy(),
        xi=ones.copy(),
        aux_a=ones.copy(),
        aux_b=ones.copy(),
    )


@dataclass(frozen=True)
class PosteriorSummary:
    """Medians, central 95% quantiles and per-observation effective sizes."""

    family: PriorFamily
    n: int
    retained: int
    phi_median: np.ndarray
    phi_lower: np.ndarray
    phi_upper: np.ndarray
    phi_ess: np.ndarray
    mu_median: float
    mu_lower: float
    mu_upper: float
    sigma2_median: float
    sigma2_lower: float
    sigma2_upper: float
    z_median: float
    z_lower: float
    z_upper: float
    slice_evaluations: int

    def __post_init__(self) -> None:
        if np.any(self.phi_lower > self.phi_median) or np.any(self.phi_median > self.phi_upper):
            raise ValueError("phi quantiles out of order")
        if np.any(self.phi_ess > self.retained + 1e-9):
            raise ValueError("effective sample size exceeds retained draw count")
