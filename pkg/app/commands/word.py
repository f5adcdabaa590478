# app/commands/word.py - normal forms of Artin group words

import json
import sys

from app.commands import add_output_flags
from app.schemas import RunConfig, Subcommand
from app.services.garside import GroupElement, artin_group, phi
from app.utils.complex_io import write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("word", help="reduced fraction of a word such as 's1 s2 s3^-1'")
    parser.add_argument("diagram", help="B3 or A5")
    parser.add_argument("word", nargs="+", help="generators, with ^-1 for inverses")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _describe(g: GroupElement) -> dict:
    W = g.group.coxeter
    return {
        "group": g.group.name,
        "reduced": str(g),
        "numerator": ["".join(W.word_names(f)) for f in g.numerator.factors],
        "denominator": ["".join(W.word_names(f)) for f in g.denominator.factors],
        "delta_power": -g.delta_power,
        "factors": ["".join(W.word_names(f)) for f in g.factors],
    }


def run(args) -> int:
    config = RunConfig(
        subcommand=Subcommand.WORD,
        diagram=args.diagram,
        output_path=args.output_path,
        json_output=args.json_output,
    )
    group = artin_group(config.diagram)
    g = group.parse(" ".join(args.word))
    payload = {"input": " ".join(args.word), "element": _describe(g)}
    if group.name.startswith("B"):
        payload["phi"] = _describe(phi(g))

    if config.json_output:
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = []
        for label in ("element", "phi"):
            if label not in payload:
                continue
            info = payload[label]
            numerator = "".join(f"[{f}]" for f in info["numerator"]) or "e"
            denominator = "".join(f"[{f}]" for f in info["denominator"]) or "e"
            lines.append(f"{label} in A({info['group']}): {info['reduced']}")
            lines.append(f"   fraction: {numerator} * ({denominator})^-1")
            lines.append(f"   Delta^{info['delta_power']} * {''.join(f'[{f}]' for f in info['factors']) or 'e'}")
        text = "\n".join(lines) + "\n"
    write_text(text, config.output_path, sys.stdout)
    return 0
