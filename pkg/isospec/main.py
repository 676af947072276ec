#!/usr/bin/env python3

import argparse
import logging
import signal
import sys

from dotenv import dotenv_values

from isospec.config import settings
from isospec.emit import to_json
from isospec.errors import InvalidArgumentError, IsospecError
from isospec.logging_config import configure_logging
from isospec.models import LambdaSweep, RunConfig
from isospec.pipeline import COMMANDS, SCHEMAS, run

logger = logging.getLogger(__name__)

# flags whose values may start with a minus sign
RANGE_FLAGS = ("--domain", "--lambda-sweep", "--lambda")

FILE_KEYS = {
    "model": "model",
    "case": "case",
    "lambda": "lam",
    "lambda-sweep": "lambda_sweep",
    "domain": "domain",
    "points": "points",
    "levels": "levels",
    "indices": "indices",
    "member": "member",
    "seed-kind": "seed_kind",
    "tol": "tol",
    "output": "output",
    "format": "format",
    "workers": "workers",
}

DEFAULTS = {"points": 2001, "levels": 6, "seed_kind": "j"}


def preprocess_argv(argv: list) -> list:
    """Glue ``--domain -2:10`` into ``--domain=-2:10`` so argparse keeps the sign."""
    out, i = [], 0
    while i < len(argv):
        token = argv[i]
        if token in RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    """Command line parser with one subcommand per pipeline function."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="oscillator1d, free1d, free3d, isotropic-l or isotropic-n")
    common.add_argument("--case", help="unique, reflected, I or II depending on the model")
    common.add_argument("--lambda", dest="lam", type=float, help="deformation parameter")
    common.add_argument("--lambda-sweep", help="start:stop:count")
    common.add_argument("--domain", help="lower:upper")
    common.add_argument("--points", type=int, help="grid points (default 2001)")
    common.add_argument("--levels", type=int, help="number of levels (default 6)")
    common.add_argument("--indices", help="comma-separated indices, tuple entries joined by ':'")
    common.add_argument("--member", type=int, help="family member (l or n)")
    common.add_argument("--seed-kind", choices=("j", "n"), help="spherical Bessel kind for free3d seeds")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--output", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--config", help="key=value file with defaults for the flags above")
    common.add_argument("--workers", type=int, help="parallel workers for lambda sweeps")
    common.add_argument("--debug", action="store_true", help="log at DEBUG level")

    parser = argparse.ArgumentParser(
        description="Isospectral deformations of Schrodinger operators by the factorization method",
    )
    parser.add_argument("--schema", action="store_true", help="print the output column schema and exit")
    commands = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        commands.add_parser(name, parents=[common])
    return parser


def _numbers(text: str, count: int, flag: str) -> list:
    parts = text.split(":")
    if len(parts) != count:
        raise InvalidArgumentError(f"{flag} expects {count} ':'-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise InvalidArgumentError(f"{flag} has a non-numeric entry: {text!r}") from None


def parse_indices(text: str) -> tuple:
    def number(token):
        value = float(token)
        return int(value) if value.is_integer() and "." not in token else value

    try:
        return tuple(tuple(number(t) for t in entry.split(":")) for entry in text.split(",") if entry.strip())
    except ValueError:
        raise InvalidArgumentError(f"--indices has a non-numeric entry: {text!r}") from None


def _merge(args: argparse.Namespace) -> dict:
    values = {}
    config_path = getattr(args, "config", None)
    if config_path:
        file_values = dotenv_values(config_path)
        if not file_values:
            logger.warning(f"config file {config_path} is empty or missing")
        for key, value in file_values.items():
            if key not in FILE_KEYS:
                raise InvalidArgumentError(f"unknown key {key!r} in {config_path}")
            values[FILE_KEYS[key]] = value
    for field in FILE_KEYS.values():
        cli = getattr(args, field, None)
        if cli is not None:
            values[field] = cli
    for field, default in DEFAULTS.items():
        values.setdefault(field, default)
    values.setdefault("workers", settings.workers)
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    if not args.command:
        raise InvalidArgumentError(f"a command is required: {', '.join(COMMANDS)}")
    values = _merge(args)
    if not values.get("model"):
        raise InvalidArgumentError("--model is required")
    sweep = None
    if values.get("lambda_sweep"):
        start, stop, count = _numbers(str(values["lambda_sweep"]), 3, "--lambda-sweep")
        if not count.is_integer():
            raise InvalidArgumentError("--lambda-sweep count must be an integer")
        sweep = LambdaSweep(start, stop, int(count))
    domain = tuple(_numbers(str(values["domain"]), 2, "--domain")) if values.get("domain") else None
    fmt = values.get("format") or ("json" if args.command == "verify" else "csv")
    try:
        return RunConfig(
            command=args.command,
            model=str(values["model"]),
            case=values.get("case") or None,
            lam=float(values["lam"]) if values.get("lam") not in (None, "") else None,
            sweep=sweep,
            domain=domain,
            points=int(values["points"]),
            member=int(values["member"]) if values.get("member") not in (None, "") else None,
            levels=int(values["levels"]),
            indices=parse_indices(str(values["indices"])) if values.get("indices") else (),
            seed_kind=str(values["seed_kind"]),
            tol=float(values["tol"]) if values.get("tol") not in (None, "") else None,
            output=values.get("output") or None,
            fmt=fmt,
            workers=int(values["workers"]),
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, IsospecError):
            raise
        raise InvalidArgumentError(f"malformed option value: {e}") from e


def handle_exit(signum, frame):
    """Handle exit signals gracefully."""
    logger.info("Received signal to terminate. Shutting down...")
    sys.exit(130)


def main(argv=None) -> int:
    """Main entry point for the command line."""
    signal.signal(signal.SIGINT, handle_exit)
    signal.signal(signal.SIGTERM, handle_exit)

    argv = preprocess_argv(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "debug", False), settings.log_dir)

    if args.schema:
        sys.stdout.write(to_json(SCHEMAS) + "\n")
        return 0

    try:
        config = build_config(args)
        return run(config)
    except IsospecError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Error in main application: {str(e)}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
