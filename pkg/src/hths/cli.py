"""Command-line front end: densities, sampling, risk curves, figure data.

Every subcommand accepts ``--config`` (flat JSON whose keys mirror the flag
names; explicit flags win) and echoes the effective configuration into its
output so any artifact can be regenerated from its own header.

Exit codes: 0 success, 2 usage error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .densities import UnsupportedFamilyError, density_gamma, density_p, density_tau
from .families import ALL_FAMILIES, CLOSED_FORM_FAMILIES, PriorFamily
from .mcmc import (
    ChainConfig,
    DivergedChainError,
    FixedGlobals,
    GlobalPriors,
    run_chain,
    save_store,
)
from .quadrature import QuadratureError
from .risk import (
    MassUnderflowError,
    OriginAsymptoteError,
    kl_risk_bound,
    log_predictive_score,
    marginal_likelihood,
    phi_marginal,
)
from .sim import SimulationDesign, evaluate_models

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_NUMERIC_ERRORS = (
    DivergedChainError,
    QuadratureError,
    MassUnderflowError,
    OriginAsymptoteError,
    UnsupportedFamilyError,
)

_DEFAULTS: dict[str, dict] = {
    "density": {
        "family": "hths",
        "var": "gamma",
        "at": None,
        "grid": None,
        "output": None,
        "format": "csv",
        "seed": 0,
    },
    "sample": {
        "family": "hths",
        "data": None,
        "column": None,
        "iterations": 55_000,
        "burn_in": 5_000,
        "thinning": 5,
        "slice_width": 2.0,
        "fix_globals": None,
        "output": "draws.hths",
        "format": "json",
        "seed": 0,
    },
    "risk": {
        "families": "hs,hs+,hths,hths+",
        "phi0": 0.0,
        "n_grid": "10,100,1000",
        "output": None,
        "format": "csv",
        "seed": 0,
    },
    "predictive": {
        "families": "hs,hs+,hths,hths+",
        "grid": "-10:10:41",
        "output": None,
        "format": "csv",
        "seed": 0,
    },
    "simulate": {
        "eta": 0.2,
        "n": 400,
        "replicates": 5,
        "mu_true": 0.0,
        "paper_scale": False,
        "workers": 1,
        "output": None,
        "format": "table",
        "seed": 0,
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hths", description="Heavy-tailed horseshoe shrinkage toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.set_defaults(**{})
        p.add_argument("--config", help="flat JSON config file; flags override")
        p.add_argument("--output", help="output file path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json", "table"))
        p.add_argument("--seed", type=int)

    p = sub.add_parser("density", help="closed-form and numerical prior densities",
                       argument_default=argparse.SUPPRESS)
    p.add_argument("--family", help="prior family (hs, hs+, hths, hths+, hths_lambda)")
    p.add_argument("--var", choices=("gamma", "tau", "p", "phi"))
    p.add_argument("--at", type=float, action="append", help="evaluation point (repeatable)")
    p.add_argument("--grid", help="lo:hi:count evaluation grid")
    common(p)

    p = sub.add_parser("sample", help="run one posterior chain",
                       argument_default=argparse.SUPPRESS)
    p.add_argument("--family")
    p.add_argument("--data", help="observations, one per line, or CSV with --column")
    p.add_argument("--column", help="CSV column name holding the observations")
    p.add_argument("--iterations", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--thinning", type=int)
    p.add_argument("--slice-width", dest="slice_width", type=float)
    p.add_argument("--fix-globals", dest="fix_globals",
                   help="comma list, e.g. mu=0,sigma2=1,z=1")
    common(p)

    p = sub.add_parser("risk", help="KL risk-bound curves",
                       argument_default=argparse.SUPPRESS)
    p.add_argument("--families", help="comma-separated family list")
    p.add_argument("--phi0", type=float)
    p.add_argument("--n-grid", dest="n_grid", help="comma-separated sample sizes")
    common(p)

    p = sub.add_parser("predictive", help="log-predictive score curves",
                       argument_default=argparse.SUPPRESS)
    p.add_argument("--families", help="comma-separated family list")
    p.add_argument("--grid", help="lo:hi:count grid of y values")
    common(p)

    p = sub.add_parser("simulate", help="sparse-means benchmark",
                       argument_default=argparse.SUPPRESS)
    p.add_argument("--eta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--mu-true", dest="mu_true", type=float)
    p.add_argument("--paper-scale", dest="paper_scale", action="store_true")
    p.add_argument("--workers", type=int)
    common(p)
    return parser


def _effective_config(args: argparse.Namespace) -> dict:
    provided = {k: v for k, v in vars(args).items() if k != "command"}
    merged = dict(_DEFAULTS[args.command])
    config_path = provided.pop("config", None)
    if config_path:
        loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        if not isinstance(loaded, dict):
            raise SystemExit("config file must hold a flat JSON object")
        unknown = set(loaded) - set(merged)
        if unknown:
            raise SystemExit(f"config keys not recognized for {args.command}: {sorted(unknown)}")
        merged.update(loaded)
    merged.update(provided)
    return merged


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, count = spec.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    except ValueError as exc:
        raise SystemExit(f"bad grid spec {spec!r}, expected lo:hi:count") from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _config_header(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True)


def _rows_output(cfg: dict, header: list[str], rows: list[tuple], fmt: str) -> str:
    if fmt == "json":
        payload = {"config": cfg, "columns": header, "rows": [list(r) for r in rows]}
        return json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    if fmt == "csv":
        lines = [f"# config: {_config_header(cfg)}", ",".join(header)]
        for row in rows:
            lines.append(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
        return "\n".join(lines) + "\n"
    widths = [max(len(h), 14) for h in header]
    lines = [f"config: {_config_header(cfg)}",
             "".join(f"{h:>{w + 2}}" for h, w in zip(header, widths))]
    for row in rows:
        lines.append(
            "".join(
                f"{(f'{v:.6g}' if isinstance(v, float) else str(v)):>{w + 2}}"
                for v, w in zip(row, widths)
            )
        )
    return "\n".join(lines) + "\n"


def _cmd_density(cfg: dict) -> int:
    family = PriorFamily.parse(cfg["family"])
    var = cfg["var"]
    if cfg["at"] is not None:
        xs = np.asarray(cfg["at"], dtype=float)
    elif cfg["grid"] is not None:
        xs = _parse_grid(cfg["grid"])
    else:
        raise SystemExit("density needs --at or --grid")

    def evaluate(x: float) -> float:
        if var == "gamma":
            return density_gamma(family, x)
        if var == "tau":
            return density_tau(family, x)
        if var == "p":
            value = density_p(family, x)
            if not isinstance(value, float):
                raise UnsupportedFamilyError(
                    f"{family.label} puts a point mass at p = 1/2; no density to tabulate"
                )
            return value
        return phi_marginal(family, x)

    try:
        rows = [(family.label, float(x), evaluate(float(x))) for x in xs]
    except UnsupportedFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if var in ("gamma", "tau"):
            print("hint: only hs, hs+, hths, hths+ have closed-form scale densities; "
                  "the lambda variant needs quadrature (--var p is available)", file=sys.stderr)
        return EXIT_USAGE
    _emit(_rows_output(cfg, ["family", "x", "density"], rows, cfg["format"]), cfg["output"])
    return EXIT_OK


def _parse_fix_globals(spec: str | None) -> FixedGlobals:
    if not spec:
        return FixedGlobals()
    values: dict[str, float] = {}
    for part in spec.split(","):
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in ("mu", "sigma2", "z") or not raw:
            raise SystemExit(f"bad --fix-globals entry {part!r}")
        values[key] = float(raw)
    return FixedGlobals(**values)


def _read_data(path: str | None, column: str | None) -> np.ndarray:
    if not path:
        raise SystemExit("sample needs --data")
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if column is not None:
        header = lines[0].split(",")
        if column not in header:
            raise SystemExit(f"column {column!r} not found in {path}")
        idx = header.index(column)
        return np.array([float(ln.split(",")[idx]) for ln in lines[1:]])
    try:
        return np.array([float(ln) for ln in lines])
    except ValueError as exc:
        raise SystemExit(f"could not parse {path} as one number per line: {exc}") from exc


def _cmd_sample(cfg: dict) -> int:
    family = PriorFamily.parse(cfg["family"])
    y = _read_data(cfg["data"], cfg["column"])
    config = ChainConfig(
        iterations=cfg["iterations"],
        burn_in=cfg["burn_in"],
        thinning=cfg["thinning"],
        seed=cfg["seed"],
        slice_width=cfg["slice_width"],
        fixed_globals=_parse_fix_globals(cfg["fix_globals"]),
    )
    summary, store = run_chain(y, family, priors=GlobalPriors(), config=config)
    save_store(cfg["output"], store)
    payload = {
        "config": cfg,
        "draws_file": cfg["output"],
        "retained": summary.retained,
        "phi_median": [float(v) for v in summary.phi_median],
        "phi_lower": [float(v) for v in summary.phi_lower],
        "phi_upper": [float(v) for v in summary.phi_upper],
        "phi_ess": [float(v) for v in summary.phi_ess],
        "mu": [summary.mu_median, summary.mu_lower, summary.mu_upper],
        "sigma2": [summary.sigma2_median, summary.sigma2_lower, summary.sigma2_upper],
        "z": [summary.z_median, summary.z_lower, summary.z_upper],
        "slice_evaluations": summary.slice_evaluations,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    summary_path = cfg["output"] + ".summary.json"
    Path(summary_path).write_text(text, encoding="utf-8", newline="\n")
    sys.stdout.write(text)
    return EXIT_OK


def _parse_families(spec: str) -> list[PriorFamily]:
    return [PriorFamily.parse(tok) for tok in spec.split(",") if tok.strip()]


def _cmd_risk(cfg: dict) -> int:
    families = _parse_families(cfg["families"])
    ns = sorted(int(tok) for tok in str(cfg["n_grid"]).split(","))
    rows = []
    for fam in sorted(families, key=lambda f: f.label):
        if fam not in CLOSED_FORM_FAMILIES:
            raise SystemExit(f"risk bounds need a closed-form family, got {fam.label}")
        for n in ns:
            rows.append(
                (
                    fam.label,
                    n,
                    float(np.sqrt(2.0 / n)),
                    kl_risk_bound(fam, cfg["phi0"], n),
                )
            )
    _emit(
        _rows_output(cfg, ["family", "n", "half_width", "bound"], rows, cfg["format"]),
        cfg["output"],
    )
    return EXIT_OK


def _cmd_predictive(cfg: dict) -> int:
    families = _parse_families(cfg["families"])
    ys = _parse_grid(cfg["grid"])
    rows = []
    for fam in sorted(families, key=lambda f: f.label):
        if fam not in CLOSED_FORM_FAMILIES:
            raise SystemExit(f"predictive scores need a closed-form family, got {fam.label}")
        scores = log_predictive_score(fam, [float(v) for v in ys])
        for yv, sc in zip(ys, scores):
            rows.append((fam.label, float(yv), marginal_likelihood(fam, float(yv)), float(sc)))
    _emit(
        _rows_output(cfg, ["family", "y", "marginal", "score"], rows, cfg["format"]),
        cfg["output"],
    )
    return EXIT_OK


def _cmd_simulate(cfg: dict) -> int:
    if cfg["paper_scale"]:
        design = SimulationDesign.paper_scale(eta=cfg["eta"], seed=cfg["seed"], n=cfg["n"])
    else:
        design = SimulationDesign(
            n=cfg["n"],
            eta=cfg["eta"],
            mu_true=cfg["mu_true"],
            replicates=cfg["replicates"],
            seed=cfg["seed"],
        )
    report = evaluate_models(design, max_workers=cfg["workers"])
    if cfg["format"] == "json":
        text = report.to_json() + "\n"
    else:
        text = f"config: {_config_header(cfg)}\n" + report.to_table()
    _emit(text, cfg["output"])
    if cfg["output"]:
        json_path = cfg["output"] + ".json" if cfg["format"] != "json" else cfg["output"]
        if cfg["format"] != "json":
            Path(json_path).write_text(report.to_json() + "\n", encoding="utf-8", newline="\n")
    if any(r.diverged for r in report.replicates):
        return EXIT_NUMERIC
    return EXIT_OK


_COMMANDS = {
    "density": _cmd_density,
    "sample": _cmd_sample,
    "risk": _cmd_risk,
    "predictive": _cmd_predictive,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
        return _COMMANDS[args.command](cfg)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(f"error: {exc.code}", file=sys.stderr)
            return EXIT_USAGE
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
