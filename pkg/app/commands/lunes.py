# app/commands/lunes.py - lune boundary paths in C(B3)

import json
import sys

from app.commands import add_output_flags
from app.schemas import RunConfig, Subcommand
from app.services.development import lune_boundaries
from app.utils.complex_io import write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("lunes", help="edge paths of length pi between antipodal vertices of C(B3)")
    parser.add_argument("terminal_type", type=int, choices=(1, 2, 3))
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = RunConfig(subcommand=Subcommand.LUNES, output_path=args.output_path, json_output=args.json_output)
    lunes = lune_boundaries(args.terminal_type)
    if config.json_output:
        payload = [
            {"vertices": list(lune.path.vertices), "types": list(lune.path.types), "length": round(lune.length, 12)}
            for lune in lunes
        ]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"{len(lunes)} lune boundaries ending at type {args.terminal_type} vertices"]
        for lune in lunes:
            pattern = "-".join(str(t) for t in lune.path.types)
            lines.append(f"  {pattern:<12} {lune.length:.9f}  {' '.join(lune.path.vertices)}")
        text = "\n".join(lines) + "\n"
    write_text(text, config.output_path, sys.stdout)
    return 0
