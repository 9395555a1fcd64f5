#!/usr/bin/env python3
"""
Dirac-Oscillator - Main Entry Point

Exactly solvable Dirac radial problems: spectra, wavefunctions,
verification suites and point canonical transformations.

Exit codes: 0 success, 1 usage or validation error, 2 verification failure.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from config.settings import Settings
from controller import VerificationController
from dirac.errors import DiracError, NoBoundStateError, NonConstantDifferenceError, TermMatchingError
from dirac.solutions import CLASSES, solution_builder, spectrum_table
from dirac.xpct import (
    FAMILIES,
    TransformSpec,
    derive,
    make_family,
    spectrum_from_matching,
    verify_coupling_identity,
)
from models.run_config import SUITES, RunConfig
from report import ReportWriter
from utils.logger import log_checks, log_run_config, setup_logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2

IDENTITY_SAMPLES = 50

# CLI destinations renamed to RunConfig fields
_FIELD_NAMES = {"class": "class_name", "lambda": "lam"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dirac-oscillator", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--config", help="key=value run file (command-line flags take precedence)")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    def physics(sub):
        sub.add_argument("--alpha", type=float)
        sub.add_argument("--lambda", dest="lam", type=float)
        sub.add_argument("--kappa", type=float)
        sub.add_argument("--Z", type=float)
        sub.add_argument("--tau", type=float)
        sub.add_argument("--rho", type=float)
        sub.add_argument("--beta", type=float)
        sub.add_argument("--l", type=int)
        sub.add_argument("--branch", type=int, choices=(1, -1))

    spectrum = commands.add_parser("spectrum", help="energy table of one class")
    spectrum.add_argument("--class", dest="class_name", choices=CLASSES)
    physics(spectrum)
    spectrum.add_argument("--nmin", type=int)
    spectrum.add_argument("--nmax", type=int)
    spectrum.add_argument("--format", choices=("csv", "json"))
    spectrum.add_argument("--out")

    wavefunction = commands.add_parser("wavefunction", help="sample φ and θ on a grid (CSV)")
    wavefunction.add_argument("--class", dest="class_name", choices=CLASSES)
    physics(wavefunction)
    wavefunction.add_argument("--n", type=int)
    wavefunction.add_argument("--grid", help="mapping:N:r_min:r_max, e.g. uniform:4000:0:12")
    wavefunction.add_argument("--out")

    verify = commands.add_parser("verify", help="run verification suites (JSON report)")
    verify.add_argument("--suite", help=f"all or one of {', '.join(SUITES)}")
    verify.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")
    verify.add_argument("--out")

    xpct = commands.add_parser("xpct", help="point canonical transformation of the oscillator")
    xpct.add_argument("--family", choices=FAMILIES)
    xpct.add_argument("--kappa-hat", dest="kappa_hat", type=float)
    xpct.add_argument("--mu", type=float)
    physics(xpct)
    xpct.add_argument("--n", type=int)
    xpct.add_argument("--out")
    return parser


def _parse_tolerances(items: Optional[List[str]]) -> Optional[Dict[str, float]]:
    if not items:
        return None
    tolerances = {}
    for item in items:
        if "=" not in item:
            raise ValueError(f"--tol expects NAME=VALUE, got '{item}'")
        key, value = item.split("=", 1)
        tolerances[key.strip()] = float(value)
    return tolerances


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the run file and the command line into a RunConfig

    Args:
        args: Parsed arguments

    Returns:
        Validated RunConfig
    """
    values: Dict[str, Any] = {}
    for key, value in Settings.load_run_file(args.config).items():
        values[_FIELD_NAMES.get(key, key)] = value

    cli = {k: v for k, v in vars(args).items() if k not in ("config", "verbose", "tol") and v is not None}
    if getattr(args, "tol", None):
        cli["tolerances"] = _parse_tolerances(args.tol)
    values.update(cli)
    return RunConfig(**values)


def cmd_spectrum(config: RunConfig) -> int:
    params = config.class_params()
    rows = spectrum_table(config.class_name, params, config.nmin, config.nmax)
    ReportWriter(config.out).write_spectrum(config.class_name, params, rows, config.format)
    return EXIT_OK


def cmd_wavefunction(config: RunConfig) -> int:
    solution = solution_builder(config.class_name, config.class_params())(config.n)
    ReportWriter(config.out).write_wavefunction(solution, config.grid.to_grid())
    return EXIT_OK


def cmd_verify(config: RunConfig, logger: logging.Logger) -> int:
    controller = VerificationController(config.tolerances)
    report = controller.run(config.suite)
    log_checks(logger, report["checks"])
    ReportWriter(config.out).write_verify_report(report)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def _transform_spec(config: RunConfig) -> TransformSpec:
    """TransformSpec from the xpct flags"""
    if config.family == "square":
        if config.kappa_hat is None and config.kappa is not None:
            return TransformSpec.for_coulomb(int(config.kappa), config.Z, config.alpha)
        return TransformSpec(make_family("square"), alpha=config.alpha, kappa_hat=config.kappa_hat, Z=config.Z)
    if config.family == "neglog":
        return TransformSpec.for_morse(config.tau, config.rho, config.lam, config.alpha)

    mu = config.mu
    if mu is None and config.beta is not None:
        mu = -0.5 + 1.0 / config.beta
    family = make_family("power", mu=mu)
    kappa_hat = config.kappa_hat
    if kappa_hat is None:
        kappa_hat = -0.5 - (2 * config.l + 1) / abs(family.beta)
    return TransformSpec(family, alpha=config.alpha, lam=config.lam, kappa_hat=kappa_hat)


def cmd_xpct(config: RunConfig) -> int:
    spec = _transform_spec(config)
    result = derive(spec)
    payload: Dict[str, Any] = {"schema": Settings.REPORT_SCHEMA, "derived": result.to_dict()}

    exit_code = EXIT_OK
    try:
        payload["spectrum_relation"] = spectrum_from_matching(spec, result).to_dict()
    except TermMatchingError as e:
        payload["spectrum_relation"] = {"status": "failed", "reason": str(e), "pass": False}
        exit_code = EXIT_VERIFY

    xs = np.linspace(0.2, 3.0, IDENTITY_SAMPLES)
    try:
        identity = verify_coupling_identity(spec, result, xs, n=config.n)
        payload["identity"] = {**identity.to_dict(), "pass": True}
    except NoBoundStateError as e:
        payload["identity"] = {"status": "not-applicable", "reason": str(e)}
    except NonConstantDifferenceError as e:
        payload["identity"] = {"status": "failed", "reason": str(e), "pass": False}
        exit_code = EXIT_VERIFY

    ReportWriter(config.out).write(ReportWriter.render_json(payload))
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logger; stdout is reserved for reports
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)

    try:
        config = load_config(args)
    except ValidationError as e:
        for error in e.errors():
            location = ".".join(str(p) for p in error["loc"])
            message = error["msg"].removeprefix("Value error, ")
            print(f"error: {location + ': ' if location else ''}{message}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    log_run_config(logger, config)

    try:
        if config.command == "spectrum":
            return cmd_spectrum(config)
        if config.command == "wavefunction":
            return cmd_wavefunction(config)
        if config.command == "verify":
            return cmd_verify(config, logger)
        return cmd_xpct(config)
    except DiracError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\n\nOperation cancelled by user.", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
