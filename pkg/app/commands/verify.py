# app/commands/verify.py - the aggregate verification suite

import sys

from app.commands import add_output_flags
from app.core import config as settings
from app.schemas import ConditionStatus, RunConfig, Subcommand
from app.services.verification import format_verification, run_verification
from app.utils.complex_io import write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify-paper", help="run every finite check on C(B3), D(B3) and D(A5)")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--radius-b3", type=int, default=settings.RADIUS_B3)
    parser.add_argument("--radius-a5", type=int, default=settings.RADIUS_A5)
    parser.add_argument("--search-radius", type=int, default=settings.SEARCH_RADIUS)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = RunConfig(
        subcommand=Subcommand.VERIFY_PAPER,
        seed=args.seed,
        radius_b3=args.radius_b3,
        radius_a5=args.radius_a5,
        search_radius=args.search_radius,
        output_path=args.output_path,
        json_output=args.json_output,
    )
    report = run_verification(config)
    text = report.to_json() + "\n" if config.json_output else format_verification(report)
    write_text(text, config.output_path, sys.stdout)
    # inconclusive checks are counted in the report but do not fail the run
    return 1 if report.verdict == ConditionStatus.FAIL else 0
