"""Command-line front end: ``jsl <subcommand> ...``.

Exit codes: 0 success, 2 usage, 3 configuration, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
from pathlib import Path

import numpy as np

from .convergence_lab import ConfigError, ExperimentConfig, deterministic_convergence_probe, run_experiment
from .fourier_jacobi import IntegrandError, catalog_help, coefficients, target_from_descriptor
from .io import atomic_write_text
from .jacobi_core import JacobiParams, QuadratureError, WeightParams
from .methods import parse_method
from .stable_process import sample_path, stochastic_integral, write_path
from .summation import DEFAULT_PROBES

EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 2, 3, 4
SEED_ENV = "JSL_SEED"


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _target(text: str):
    try:
        return target_from_descriptor(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _method(text: str):
    try:
        return parse_method(text)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# config files


_CONFIG_KEYS = {
    "target": {"f": ("target", str)},
    "basis": {"gamma": ("gamma", float), "delta": ("delta", float)},
    "weight": {"eta": ("eta", float), "tau": ("tau", float)},
    "method": {"descriptor": ("method", str)},
    "process": {"alpha": ("alpha", float), "grid_size": ("grid_size", int)},
    "monte_carlo": {
        "paths": ("paths", int),
        "epsilon": ("epsilon", float),
        "n_schedule": ("n_schedule", lambda s: tuple(_int_list(s))),
        "mode": ("mode", str),
        "seed": ("seed", int),
        "A": ("A", float),
        "point_kernel": ("point_kernel", str),
    },
}


def load_config(path) -> ExperimentConfig:
    """Read a bracketed-section key=value file into an ExperimentConfig.

    Unknown sections or keys are errors; missing keys take the defaults of
    ExperimentConfig.  ``JSL_SEED`` in the environment overrides ``seed``.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        for key, raw in parser.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}] of {path}")
            field, convert = _CONFIG_KEYS[section][key]
            try:
                values[field] = convert(raw.strip())
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"bad value for {key} in [{section}]: {raw!r}") from exc
    if SEED_ENV in os.environ:
        try:
            values["seed"] = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    config = ExperimentConfig(**values)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeffs(args) -> int:
    if args.N < 0:
        raise UsageError("--N must be a nonnegative integer")
    f = _target(args.f)
    coeffs = coefficients(f, args.N, JacobiParams(args.gamma, args.delta))
    text = "n,a_n\n" + "".join(f"{n},{a!r}\n" for n, a in enumerate(coeffs.values.tolist()))
    sys.stdout.write(text)
    print(f"# quadrature nodes: {coeffs.quadrature_order}", file=sys.stderr)
    if args.out:
        atomic_write_text(Path(args.out), text)
    return 0


def cmd_theta(args) -> int:
    method = _method(args.method)
    if method.kind != "theta":
        raise UsageError("theta expects a Theta method (identity, cesaro, riesz, vp, rogosinski)")
    for n in range(1, args.n + 1):
        row = method.theta.row(n)
        print(f"{n}: " + " ".join(f"{v:.10g}" for v in row))
    if args.f:
        f = _target(args.f)
        basis = JacobiParams(args.gamma, args.delta)
        coeffs = coefficients(f, args.n, basis)
        from .summation import theta_sum

        value = theta_sum(method.theta, coeffs, args.n, args.y)
        print(f"Theta-sum of order {args.n} at y={args.y:g}: {value!r}")
    return 0


def cmd_conditions(args) -> int:
    method = _method(args.method)
    print(method.structural_report(args.probes).to_text())
    return 0


def cmd_simulate(args) -> int:
    path = sample_path(args.alpha, args.G, args.seed)
    if args.out:
        write_path(path, args.out)
    else:
        print(f"# alpha={args.alpha:g} seed={args.seed} G={args.G}")
        for t, x in zip(path.grid.tolist(), path.values.tolist()):
            print(f"{t!r} {x!r}")
    if args.integrand:
        g = _target(args.integrand)
        print(f"# integral of {args.integrand}: {stochastic_integral(g, path)!r}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    config = load_config(args.config)
    report = run_experiment(config, threads=args.threads)
    out = Path(args.out)
    stem = Path(args.config).stem
    atomic_write_text(out / f"{stem}.csv", report.to_csv())
    atomic_write_text(out / f"{stem}.gate.txt", report.gate_text())
    if args.plot:
        atomic_write_text(out / f"{stem}.svg", report.to_svg())
    sys.stdout.write(report.to_csv())
    print(f"gate: {'pass' if report.gate.passed else 'fail'}; wrote {out / (stem + '.csv')}", file=sys.stderr)
    return 0


def cmd_probe(args) -> int:
    f = _target(args.f)
    method = _method(args.method)
    table, gate = deterministic_convergence_probe(
        f, JacobiParams(args.gamma, args.delta), WeightParams(args.eta, args.tau), method, args.schedule
    )
    print("n,weighted_sup_error")
    for n, err in table:
        print(f"{n},{err!r}")
    print(gate.to_text(), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jsl", description="Fourier-Jacobi summability and alpha-stable Monte Carlo lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="Fourier-Jacobi coefficients of a catalog function")
    p.add_argument("--f", required=True, help=f"target function ({catalog_help()})")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--out", help="also write the CSV here")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("theta", help="print Theta-matrix rows (and optionally a Theta-sum)")
    p.add_argument("--method", required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--f")
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("conditions", help="structural condition table of a summation method")
    p.add_argument("--method", required=True)
    p.add_argument("--probes", type=_int_list, default=list(DEFAULT_PROBES))
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("simulate", help="sample one alpha-stable path")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--G", type=int, default=512)
    p.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, 0)))
    p.add_argument("--out")
    p.add_argument("--integrand", help="catalog function to integrate against the path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment from a config file")
    p.add_argument("config")
    p.add_argument("--out", default=".")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("probe", help="weighted sup-norm error of the deterministic summed series")
    p.add_argument("--f", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--schedule", type=_int_list, default=[8, 16, 32, 64])
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=0.0)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"jsl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"jsl: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, OverflowError, IntegrandError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"jsl: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"jsl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
