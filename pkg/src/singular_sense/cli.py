"""Command line front end.

Every subcommand starts from one flat-key JSON config (optional) merged
with flag overrides, validates the physical parameters before any
computation, and then either prints a single JSON document on stdout or
writes the CSV and verdict artifacts of the benchmark sweeps.

Exit codes: 0 success, 1 verdict failure, 2 configuration error, 3 I/O
error while writing outputs.  All outputs are plain UTF-8 and are
byte-identical for identical config and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .channel import InputSpec, output_derivatives, output_state, thermal_input
from .expansion import (
    MatrixFamily,
    direct_response,
    evaluate,
    neumann_expansion,
    pole_order,
    sm_expansion,
)
from .fisher import cfim_heterodyne, cfim_monte_carlo
from .linalg import symplectic_form
from .scenarios import (
    FigureConfig,
    SweepDef,
    figure_ids,
    fit_slope,
    point_errors,
    reproduce_figure,
    sweep_error,
    write_sweep_csv,
)
from .sensor import (
    AtThresholdError,
    PhysicalityError,
    SensorParams,
    build_generator,
    classify,
    eigensystem,
    lasing_threshold,
    perturbation,
    perturbation_names,
    perturbed_generator,
    singular_detunings,
    steady_state_occupations,
)

__all__ = ["ConfigError", "RunConfig", "main"]

_J = symplectic_form(2)


class ConfigError(ValueError):
    """A run configuration that cannot be executed."""


@dataclass(frozen=True)
class RunConfig:
    """Flat bag of run settings; a JSON config file mirrors these fields.

    The defaults describe the balanced exceptional-point sensor probed by
    symmetric thermal inputs, which is the reference configuration of the
    benchmark sweeps.
    """

    g: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    kappa: float = 1.0
    omega: float = 0.0
    omega0: float = 0.0
    n_a: float = 1.0
    n_b: float = 1.0
    displacement: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    perturbation: str = "two_mode_symmetric"
    nuisance: str | None = None
    theta0: float = 0.1
    theta1: float = 0.0
    theta_min: float = 1e-4
    theta_max: float = 1.0
    points: int = 60
    samples: int = 100_000
    seed: int = 0
    tol: float = 0.05
    out: str = field(
        default_factory=lambda: os.environ.get("SINGULAR_SENSE_OUT", ".")
    )
    exact_qfim: bool = False

    @classmethod
    def from_sources(
        cls, config_path: str | None, overrides: dict
    ) -> "RunConfig":
        """Defaults, then file values, then non-None flag overrides."""
        values: dict = {}
        if config_path is not None:
            try:
                raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file is not valid JSON: {exc}") from exc
            if not isinstance(raw, dict):
                raise ConfigError("config file must hold a JSON object")
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(raw) - known)
            if unknown:
                raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
            values.update(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(**values)
        cfg.check()
        return cfg

    def check(self) -> None:
        """Physicality and plumbing checks, before any computation."""
        try:
            self.sensor_params()
            self.input_spec()
        except (PhysicalityError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        names = perturbation_names()
        if self.perturbation not in names:
            raise ConfigError(
                f"unknown perturbation {self.perturbation!r}; "
                f"choose from {', '.join(names)}"
            )
        if self.nuisance is not None and self.nuisance not in names:
            raise ConfigError(
                f"unknown nuisance {self.nuisance!r}; "
                f"choose from {', '.join(names)}"
            )
        if not 0.0 < self.theta_min < self.theta_max:
            raise ConfigError("need 0 < theta_min < theta_max")
        if self.points < 2:
            raise ConfigError("a sweep grid needs at least two points")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if not 0.0 < self.tol < 1.0:
            raise ConfigError("tol must lie in (0, 1)")

    def sensor_params(self) -> SensorParams:
        if self.kappa <= 0:
            raise PhysicalityError(
                "the probe coupling kappa must be positive; "
                "kappa = 0 disconnects the sensor from the input line"
            )
        p = SensorParams(
            g=self.g,
            gamma1=self.gamma1,
            gamma2=self.gamma2,
            kappa=self.kappa,
            omega0=self.omega0,
            omega=self.omega,
        )
        p.validate()
        return p

    def input_spec(self) -> InputSpec:
        return InputSpec(
            n_a=self.n_a,
            n_b=self.n_b,
            displacement=np.asarray(self.displacement, dtype=float),
        )


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _finite(x: float) -> float | None:
    """NaN and infinities have no strict-JSON encoding; map them to null."""
    return float(x) if math.isfinite(x) else None


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(
        json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _run_metadata(cfg: RunConfig) -> dict:
    return {
        "params": {
            "g": cfg.g,
            "gamma1": cfg.gamma1,
            "gamma2": cfg.gamma2,
            "kappa": cfg.kappa,
            "omega": cfg.omega,
            "omega0": cfg.omega0,
        },
        "inputs": {"n_a": cfg.n_a, "n_b": cfg.n_b},
        "grid": {
            "min": cfg.theta_min,
            "max": cfg.theta_max,
            "points": cfg.points,
        },
        "quantum_pipeline": "sld_exact" if cfg.exact_qfim else "noisy",
    }


def _cmd_classify(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    report = classify(p)
    eig = eigensystem(build_generator(p))
    try:
        ss = steady_state_occupations(p)
        steady = {"stable": ss.stable, "n1": ss.n1, "n2": ss.n2}
    except AtThresholdError:
        steady = {"stable": False, "n1": None, "n2": None, "at_threshold": True}
    _emit(
        {
            "singular": report.is_singular,
            "pt_symmetric": report.is_pt_symmetric,
            "ep": report.is_ep,
            "balanced": report.is_balanced,
            "stable": report.is_stable,
            "at_lasing_threshold": report.at_lasing_threshold,
            "det_m": report.det_m,
            "eigenvalues": [
                [eig.lambda_plus.real, eig.lambda_plus.imag],
                [eig.lambda_minus.real, eig.lambda_minus.imag],
            ],
            "lasing_threshold": lasing_threshold(p),
            "singular_detunings": singular_detunings(p),
            "steady_state": steady,
        }
    )
    return 0


def _cmd_steady_state(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    try:
        ss = steady_state_occupations(p)
    except AtThresholdError as exc:
        raise ConfigError(str(exc)) from exc
    _emit({"stable": ss.stable, "n1": ss.n1, "n2": ss.n2})
    return 0


def _cmd_expand(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    spec = perturbation(cfg.perturbation)
    m0 = perturbed_generator(p)
    fam = MatrixFamily.linear(m0, spec.phase_space)
    s = pole_order(fam)
    if s == 0:
        exp = neumann_expansion(-m0, spec.phase_space)
        note = "generator regular at theta0 = 0; Neumann series with pole order 0"
    else:
        exp = sm_expansion(fam)
        note = None
    out: dict = {
        "perturbation": cfg.perturbation,
        "pole_order": exp.pole_order,
        "coefficients": [c.tolist() for c in exp.coeffs],
        "includes_symplectic_prefactor": exp.includes_symplectic_prefactor,
    }
    if note is not None:
        out["note"] = note
    if args.check is not None:
        theta0 = float(args.check)
        approx = evaluate(exp, theta0)
        exact = direct_response(perturbed_generator(p, [spec], [theta0]))
        residual = float(
            np.linalg.norm(approx - exact) / np.linalg.norm(exact)
        )
        out["check"] = {"theta0": theta0, "relative_residual": residual}
    _emit(out)
    return 0


def _cmd_bounds(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    inputs = cfg.input_spec()
    primary = perturbation(cfg.perturbation)
    nuis = perturbation(cfg.nuisance) if cfg.nuisance is not None else None
    delta_c, delta_q, big_c, big_q = point_errors(
        p,
        inputs,
        primary,
        cfg.theta0,
        nuisance=nuis,
        theta1=cfg.theta1,
        exact_qfim=cfg.exact_qfim,
    )
    _emit(
        {
            "theta0": cfg.theta0,
            "theta1": cfg.theta1 if nuis is not None else None,
            "delta_c": _finite(delta_c),
            "delta_q": _finite(delta_q),
            "Delta_c": _finite(big_c),
            "Delta_q": _finite(big_q),
        }
    )
    return 0


def _cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    inputs = cfg.input_spec()
    primary = perturbation(cfg.perturbation)
    nuis = perturbation(cfg.nuisance) if cfg.nuisance is not None else None
    name = (
        cfg.perturbation
        if nuis is None
        else f"{cfg.perturbation}_with_{cfg.nuisance}"
    )
    sweep = SweepDef(name=name, primary=primary, nuisance=nuis, theta1=cfg.theta1)
    fig_cfg = FigureConfig(
        id="sweep",
        params=p,
        inputs=inputs,
        grid=np.geomspace(cfg.theta_min, cfg.theta_max, cfg.points),
        sweeps=(sweep,),
    )
    results = sweep_error(fig_cfg, exact_qfim=cfg.exact_qfim)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = []
    for result in results:
        path = out_dir / f"sweep_{result.name}.csv"
        write_sweep_csv(result, path)
        slope, pref = fit_slope(
            result.theta0, result.delta_q, (cfg.theta_min, cfg.theta_max)
        )
        curves.append(
            {
                "name": result.name,
                "slope": _finite(slope),
                "prefactor": _finite(pref),
                "pass": True,
            }
        )
        print(
            f"sweep:{result.name}: wrote {path}; "
            f"quantum slope {slope:.4g} over the full grid"
        )
    _write_json(
        out_dir / "sweep_verdict.json",
        {"figure": "sweep", "metadata": _run_metadata(cfg), "curves": curves},
    )
    return 0


def _curve_line(fig_id: str, curve: dict) -> str:
    parts = []
    for key in (
        "slope",
        "expected_slope",
        "prefactor",
        "expected_prefactor",
        "plateau_ratio",
        "decade_ratio",
        "dip_near_unit_detuning",
    ):
        if key in curve and curve[key] is not None:
            val = curve[key]
            if isinstance(val, float):
                parts.append(f"{key}={val:.4g}")
            else:
                parts.append(f"{key}={val}")
    status = "pass" if curve["pass"] else "FAIL"
    return f"{fig_id}:{curve['name']}: " + " ".join(parts) + f" [{status}]"


def _cmd_figure(cfg: RunConfig, args: argparse.Namespace) -> int:
    fig_id = args.figure_id
    if fig_id not in figure_ids():
        raise ConfigError(
            f"unknown figure id {fig_id!r}; "
            f"choose from {', '.join(figure_ids())}"
        )
    verdict = reproduce_figure(fig_id, cfg.out, exact_qfim=cfg.exact_qfim)
    failures = [c["name"] for c in verdict["curves"] if not c["pass"]]
    for curve in verdict["curves"]:
        print(_curve_line(fig_id, curve))
    print(
        f"{fig_id}: {len(verdict['curves'])} curves, "
        f"{len(failures)} failed, outputs in {cfg.out}"
    )
    return 1 if failures else 0


def _cmd_mc_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.sensor_params()
    inputs = cfg.input_spec()
    specs = [perturbation(cfg.perturbation)]
    thetas = [cfg.theta0]
    if cfg.nuisance is not None:
        specs.append(perturbation(cfg.nuisance))
        thetas.append(cfg.theta1)
    m = perturbed_generator(p, specs, thetas)
    g = direct_response(m)
    probe, scatter = thermal_input(inputs)
    state = output_state(g, p, probe, scatter)
    dgs = [g @ s.phase_space @ _J @ g for s in specs]
    dmeans, dcovs = output_derivatives(g, dgs, p, probe, scatter)
    analytic = cfim_heterodyne(state, dmeans, dcovs)
    estimate = cfim_monte_carlo(
        state, dmeans, dcovs, n_samples=cfg.samples, seed=cfg.seed
    )
    scale = float(np.max(np.abs(analytic.matrix)))
    rel = float(np.max(np.abs(estimate.matrix - analytic.matrix)) / scale)
    ok = rel < cfg.tol
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(
        out_dir / "mc_check.json",
        {
            "theta0": cfg.theta0,
            "perturbations": [s.name for s in specs],
            "samples": cfg.samples,
            "seed": cfg.seed,
            "analytic": analytic.matrix.tolist(),
            "monte_carlo": estimate.matrix.tolist(),
            "max_relative_error": rel,
            "tolerance": cfg.tol,
            "pass": ok,
        },
    )
    status = "pass" if ok else "FAIL"
    print(
        f"mc-check: max relative error {rel:.4f} with {cfg.samples} samples "
        f"(tolerance {cfg.tol:g}) [{status}]"
    )
    return 0 if ok else 1


_CONFIG_FIELDS = tuple(f.name for f in fields(RunConfig))


def _overrides(args: argparse.Namespace) -> dict:
    return {name: getattr(args, name, None) for name in _CONFIG_FIELDS}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singular-sense",
        description=(
            "Singular-response sensing toolkit: regime classification, "
            "inverse-response expansions, estimation bounds, and benchmark "
            "sweeps."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        metavar="FILE",
        help="flat-key JSON config; explicit flags override file values",
    )
    for flag in (
        "g",
        "gamma1",
        "gamma2",
        "kappa",
        "omega",
        "omega0",
        "n-a",
        "n-b",
        "theta0",
        "theta1",
        "theta-min",
        "theta-max",
        "tol",
    ):
        common.add_argument(f"--{flag}", type=float, default=None)
    common.add_argument("--points", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--perturbation", default=None)
    common.add_argument("--nuisance", default=None)
    common.add_argument(
        "--out",
        default=None,
        help="output directory (default $SINGULAR_SENSE_OUT, else '.')",
    )
    common.add_argument(
        "--exact-qfim",
        action="store_const",
        const=True,
        default=None,
        help="score quantum curves with the exact SLD pipeline",
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "classify",
        parents=[common],
        help="regime flags, eigenvalues, threshold, and steady state as JSON",
    ).set_defaults(func=_cmd_classify)
    sub.add_parser(
        "steady-state",
        parents=[common],
        help="mean mode occupations of the free-running sensor",
    ).set_defaults(func=_cmd_steady_state)
    p_expand = sub.add_parser(
        "expand",
        parents=[common],
        help="pole order and inverse-series coefficients at theta0 = 0",
    )
    p_expand.add_argument(
        "--check",
        type=float,
        metavar="THETA0",
        default=None,
        help="also print the relative residual against direct inversion",
    )
    p_expand.set_defaults(func=_cmd_expand)
    sub.add_parser(
        "bounds",
        parents=[common],
        help="classical and quantum per-shot errors at one theta0",
    ).set_defaults(func=_cmd_bounds)
    sub.add_parser(
        "sweep",
        parents=[common],
        help="sweep theta0 over a log grid and write one CSV per curve",
    ).set_defaults(func=_cmd_sweep)
    p_fig = sub.add_parser(
        "figure",
        parents=[common],
        help="reproduce a benchmark figure: CSVs plus a verdict JSON",
    )
    p_fig.add_argument("figure_id", metavar="ID")
    p_fig.set_defaults(func=_cmd_figure)
    sub.add_parser(
        "mc-check",
        parents=[common],
        help="Monte Carlo cross-check of the heterodyne Fisher information",
    ).set_defaults(func=_cmd_mc_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = RunConfig.from_sources(args.config, _overrides(args))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TypeError as exc:
        print(f"error: bad config value: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
