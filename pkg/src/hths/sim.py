"""Sparse normal-means simulation benchmark.

Signals are a symmetric three-part mixture (exact zeros plus uniform bumps
of either sign); each model's estimate is scored by the summed absolute
error against the truth and against the oracle estimator that knows which
coordinates are signals.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .families import ALL_FAMILIES, PriorFamily
from .mcmc import ChainConfig, DivergedChainError, GlobalPriors, run_chain

MODEL_MLE = "MLE"


@dataclass(frozen=True)
class SimulationDesign:
    n: int = 400
    eta: float = 0.2
    mu_true: float = 0.0
    replicates: int = 5
    seed: int = 0
    burn_in: int = 1_000
    retained: int = 2_000
    thinning: int = 2
    slice_width: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if self.n < 1 or self.replicates < 1:
            raise ValueError("n and replicates must be positive counts")

    def chain_config(self, seed: int) -> ChainConfig:
        return ChainConfig(
            iterations=self.burn_in + self.retained * self.thinning,
            burn_in=self.burn_in,
            thinning=self.thinning,
            seed=seed,
            slice_width=self.slice_width,
        )

    @classmethod
    def paper_scale(cls, eta: float, seed: int = 0, n: int = 400) -> "SimulationDesign":
        return cls(
            n=n,
            eta=eta,
            replicates=20,
            seed=seed,
            burn_in=5_000,
            retained=10_000,
            thinning=5,
        )


def generate_data(design: SimulationDesign, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw (y, phi_true): signals are Uniform(4,6) bumps of random sign."""
    u = rng.random(design.n)
    magnitude = rng.uniform(4.0, 6.0, design.n)
    phi_true = np.where(
        u < design.eta / 2.0,
        magnitude,
        np.where(u < design.eta, -magnitude, 0.0),
    )
    y = design.mu_true + phi_true + rng.standard_normal(design.n)
    return y, phi_true


def oracle_estimate(y: np.ndarray, phi_true: np.ndarray, mu_true: float) -> np.ndarray:
    """y - mu on the signal coordinates, exact zero elsewhere."""
    y = np.asarray(y, dtype=float)
    phi_true = np.asarray(phi_true, dtype=float)
    if y.shape != phi_true.shape:
        raise ValueError("y and phi_true must have matching lengths")
    return np.where(phi_true != 0.0, y - mu_true, 0.0)


@dataclass
class ReplicateResult:
    index: int
    seed: int
    mae: dict[str, float]
    oracle_distance: dict[str, float]
    diverged: list[str] = field(default_factory=list)


@dataclass
class SimulationReport:
    design: SimulationDesign
    models: list[str]
    replicates: list[ReplicateResult]

    def averages(self) -> dict[str, dict[str, float]]:
        """Per-model mean and MC standard error of both metrics."""
        out: dict[str, dict[str, float]] = {}
        for model in self.models:
            mae = np.array([r.mae[model] for r in self.replicates if model in r.mae])
            ora = np.array(
                [r.oracle_distance[model] for r in self.replicates if model in r.oracle_distance]
            )
            k = len(mae)
            out[model] = {
                "mae": float(mae.mean()) if k else float("nan"),
                "mae_se": float(mae.std(ddof=1) / np.sqrt(k)) if k > 1 else 0.0,
                "oracle": float(ora.mean()) if k else float("nan"),
                "oracle_se": float(ora.std(ddof=1) / np.sqrt(k)) if k > 1 else 0.0,
                "completed": k,
            }
        return out

    def to_json(self) -> str:
        payload = {
            "design": asdict(self.design),
            "models": self.models,
            "averages": self.averages(),
            "replicates": [asdict(r) for r in self.replicates],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_table(self) -> str:
        avg = self.averages()
        width = max(len(m) for m in self.models) + 2
        lines = [
            f"eta = {self.design.eta}   n = {self.design.n}   "
            f"replicates = {self.design.replicates}",
            f"{'model':<{width}}{'M.A.E.':>10}{'(se)':>9}{'Ora.':>10}{'(se)':>9}",
        ]
        for model in self.models:
            a = avg[model]
            lines.append(
                f"{model:<{width}}{a['mae']:>10.1f}{a['mae_se']:>9.2f}"
                f"{a['oracle']:>10.1f}{a['oracle_se']:>9.2f}"
            )
        diverged = [(r.index, m) for r in self.replicates for m in r.diverged]
        if diverged:
            lines.append(f"diverged chains: {diverged}")
        return "\n".join(lines) + "\n"


def _run_replicate(args) -> ReplicateResult:
    design, index, seed, families = args
    rng = np.random.default_rng(seed)
    y, phi_true = generate_data(design, rng)
    oracle = oracle_estimate(y, phi_true, design.mu_true)
    priors = GlobalPriors()
    mae: dict[str, float] = {}
    ora: dict[str, float] = {}
    diverged: list[str] = []

    mle = y - y.mean()
    mae[MODEL_MLE] = float(np.sum(np.abs(mle - phi_true)))
    ora[MODEL_MLE] = float(np.sum(np.abs(mle - oracle)))

    child_seeds = np.random.SeedSequence(seed).spawn(len(families))
    for fam, child in zip(families, child_seeds):
        config = design.chain_config(int(child.generate_state(1)[0]))
        try:
            summary, _ = run_chain(y, fam, priors=priors, config=config)
        except DivergedChainError:
            diverged.append(fam.label)
            continue
        est = summary.phi_median
        mae[fam.label] = float(np.sum(np.abs(est - phi_true)))
        ora[fam.label] = float(np.sum(np.abs(est - oracle)))
    return ReplicateResult(index=index, seed=seed, mae=mae, oracle_distance=ora, diverged=diverged)


def evaluate_models(
    design: SimulationDesign,
    families: tuple[PriorFamily, ...] = ALL_FAMILIES,
    max_workers: int | None = None,
) -> SimulationReport:
    """Run the full benchmark: MLE baseline plus one chain per family per replicate."""
    rep_seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(design.seed).spawn(design.replicates)]
    jobs = [(design, i, seed, families) for i, seed in enumerate(rep_seeds)]
    if max_workers is not None and max_workers > 1 and design.replicates > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_run_replicate, jobs))
    else:
        results = [_run_replicate(job) for job in jobs]
    models = [MODEL_MLE] + [f.label for f in families]
    return SimulationReport(design=design, models=models, replicates=results)
