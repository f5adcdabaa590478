# app/commands/ball.py - export (and optionally check) a ball of D(Gamma)

import sys

from app.commands import add_output_flags
from app.core.console import status
from app.schemas import EXIT_CODES, RunConfig, Subcommand
from app.services.artin_complex import ball_report, build_ball, export_ball
from app.services.cat1_checker import format_report
from app.utils.complex_io import sidecar_path, write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("ball", help="build the radius-R ball of D(B3) or D(A5)")
    parser.add_argument("diagram", help="B3 or A5")
    parser.add_argument("radius", type=int)
    parser.add_argument("--check", action="store_true", help="report the six conditions on interior vertices (B3)")
    parser.add_argument("--margin", type=int, default=2, help="interior vertices have depth <= radius - margin")
    parser.add_argument("--induced", action="store_true", help="only induced cycles, fillings off the cycle")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = RunConfig(
        subcommand=Subcommand.BALL,
        diagram=args.diagram,
        radius=args.radius,
        induced=args.induced,
        output_path=args.output_path,
        json_output=args.json_output,
    )
    ball = build_ball(config.diagram, config.radius)

    if args.check:
        report = ball_report(ball, args.margin, induced=config.induced)
        text = report.to_json() + "\n" if config.json_output else format_report(report)
        write_text(text, config.output_path, sys.stdout)
        return EXIT_CODES[report.verdict]

    text, words = export_ball(ball)
    write_text(text, config.output_path, sys.stdout)
    if config.output_path:
        words_path = sidecar_path(config.output_path, ".words.json")
        write_text(words, words_path)
        status(f"Vertex words written to {words_path}")
    return 0
