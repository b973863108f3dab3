"""Command line entry point.

Exit codes: 0 success (including violations the theory predicts),
1 an unpredicted check failure, 2 solver failure, 3 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from .errors import ConfigError, DataError, ModelError, SolverError
from .experiments import EXPERIMENTS, SUITES, ExperimentConfig, read_report, run_experiment, run_verification_suite

EXIT_OK, EXIT_CHECK, EXIT_SOLVER, EXIT_CONFIG = 0, 1, 2, 3

RUN_KEYS = ("dx", "dt", "t_end", "flux", "mu", "v", "out")
FLOAT_KEYS = ("dx", "dt", "t_end", "mu", "v")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="implicit-monotone", description="Implicit monotone schemes for scalar balance laws.")
    p.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a named experiment")
    r.add_argument("experiment", choices=EXPERIMENTS)
    r.add_argument("--dx", type=float)
    r.add_argument("--dt", type=float)
    r.add_argument("--t-end", dest="t_end", type=float)
    r.add_argument("--flux", choices=("upwind", "lf", "godunov"))
    r.add_argument("--mu", type=float)
    r.add_argument("--v", type=float)
    r.add_argument("--out", help="output directory for CSV profiles and reports")
    r.add_argument("--config", help="flat key=value file; command line flags take precedence")

    ver = sub.add_parser("verify", help="run the verification suite")
    ver.add_argument("--suite", default="all", choices=("all",) + tuple(SUITES))
    ver.add_argument("--out", help="directory for the key=value suite report")
    return p


def load_config_file(path: str) -> dict:
    """Read a flat ``key=value`` file; dashes in keys are accepted for underscores."""
    try:
        raw = read_report(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in raw.items()}


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    values = load_config_file(args.config) if args.config else {}
    for key in RUN_KEYS:
        val = getattr(args, key)
        if val is not None:
            values[key] = val
    kwargs, extra = {}, {}
    for key, val in values.items():
        if key in FLOAT_KEYS:
            try:
                kwargs[key] = float(val)
            except ValueError as exc:
                raise ConfigError(f"{key} must be a number, got {val!r}") from exc
        elif key in RUN_KEYS:
            kwargs[key] = val
        elif key == "snapshot_times":
            kwargs[key] = [float(s) for s in str(val).split(",") if s.strip()]
        else:
            extra[key] = val
    return ExperimentConfig(args.experiment, extra=extra, **kwargs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "run":
            result = run_experiment(experiment_config(args))
            for key, val in result.summary.items():
                print(f"{key}={val}")
            return EXIT_OK
        report = run_verification_suite(args.suite, args.out)
        for line in report.lines():
            print(line)
        print(f"exit_code={report.exit_code}")
        return report.exit_code
    except (ConfigError, DataError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ModelError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
