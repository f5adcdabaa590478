# app/commands/check.py - six-condition report for a complex file

import sys

from app.commands import add_output_flags
from app.core.console import status
from app.schemas import EXIT_CODES, RunConfig, Subcommand
from app.services.cat1_checker import check_cat1_criteria, format_report
from app.utils.complex_io import read_complex, write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="run the six CAT(1) conditions on a complex file")
    parser.add_argument("input_path", help="complex file (v/t/e lines)")
    parser.add_argument("--induced", action="store_true", help="only induced cycles, fillings off the cycle")
    parser.add_argument("--limit", dest="cycle_limit", type=int, default=None, help="cycle search limit")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    fields = dict(
        subcommand=Subcommand.CHECK,
        input_path=args.input_path,
        output_path=args.output_path,
        induced=args.induced,
        json_output=args.json_output,
    )
    if args.cycle_limit is not None:
        fields["cycle_limit"] = args.cycle_limit
    config = RunConfig(**fields)

    complex_ = read_complex(config.input_path)
    status(f"Checking {config.input_path}: {len(complex_)} vertices, {len(complex_.triangles)} triangles", "search")
    report = check_cat1_criteria(
        complex_,
        induced=config.induced,
        limit=config.cycle_limit,
        meta={"input": config.input_path},
    )
    text = report.to_json() + "\n" if config.json_output else format_report(report)
    write_text(text, config.output_path, sys.stdout)
    status(f"Verdict: {report.verdict.value}", "ok" if report.verdict.value == "pass" else "warn")
    return EXIT_CODES[report.verdict]
