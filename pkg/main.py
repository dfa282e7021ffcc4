#!/usr/bin/env python3
"""
Teledistill - teleportation channels, symplectic codes and one-way
distillation bounds for Pauli-diagonal noise

Usage:
    python main.py verify-lemma1 --d 2 --n 1 --seed 7
    python main.py code-fidelity --code templates/codes/bitflip.json --noise templates/noise/x01.json
    python main.py bounds --noise templates/noise/example1.json
"""

import argparse
import sys
from typing import List, Optional

from services.command_service import COMMANDS, CommandContext, run_command
from services.report_service import ReportService
from src.constants import EXIT_OK, REPORT_FORMATS
from src.error_handler import ErrorHandler, InvalidInputError, ToleranceFailure
from src.shared_init import init_session
from version import get_version_display


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teledistill",
        description="Verify teleportation-channel identities and compute distillation bounds",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Command to run")
    parser.add_argument("--d", type=int, default=None, help="Local dimension (battery commands)")
    parser.add_argument("--n", type=int, default=None, help="Number of pairs (battery commands)")
    parser.add_argument("--noise", default=None, help="Noise model JSON file")
    parser.add_argument("--code", default=None, help="Code JSON file")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random batteries")
    parser.add_argument("--output", default=None, help="Report file to write")
    parser.add_argument("--format", choices=REPORT_FORMATS, default=None, help="Report format")
    parser.add_argument("--config", default=None, help="YAML config file (default: config.yaml)")
    parser.add_argument("--log-file", default=None, help="Log file (default: timestamped file in the log dir)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log to the console")
    parser.add_argument("--version", action="version", version=get_version_display())
    return parser


@ErrorHandler.with_error_boundary("teledistill")
def run(args: argparse.Namespace) -> int:
    """Execute one command and write its report

    Returns:
        EXIT_OK when every check is within tolerance

    Raises:
        ToleranceFailure: the largest violation when some check failed
    """
    settings, logger = init_session(args.config, verbose=args.verbose, log_file=args.log_file)
    if args.d is not None and args.d < 2:
        raise InvalidInputError(f"d={args.d} must be >= 2", field="d")
    if args.n is not None and args.n < 1:
        raise InvalidInputError(f"n={args.n} must be >= 1", field="n")

    seed = settings.seed if args.seed is None else args.seed
    ctx = CommandContext(settings=settings, seed=seed, d=args.d, n=args.n, noise=args.noise, code=args.code)
    result = run_command(args.command, ctx)

    for line in result.lines:
        print(line)

    if args.output:
        fmt = args.format or settings.report_format
        reports = ReportService()
        text = reports.render(fmt, result.command, result.rows, result.passed,
                              notes=result.notes + [f"seed={seed}"])
        reports.save(args.output, text)

    if not result.passed:
        logger.log_warning(f"{result.command}: at least one check exceeded its tolerance")
        raise result.failure or ToleranceFailure(result.command, float("nan"), 0.0)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
