# app/commands/coxeter.py - write C(Gamma) for a built-in diagram

import sys

from app.commands import add_output_flags
from app.core.console import status
from app.schemas import RunConfig, Subcommand
from app.services.coxeter import CoxeterDiagram, build_coxeter_complex
from app.utils.complex_io import format_complex, format_coordinates, sidecar_path, write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("coxeter", help="write the Coxeter complex of a rank 2 or 3 diagram")
    parser.add_argument("diagram", help="A2, A3, B2 or B3")
    add_output_flags(parser, json_flag=False)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = RunConfig(subcommand=Subcommand.COXETER, diagram=args.diagram, output_path=args.output_path)
    diagram = CoxeterDiagram.from_name(config.diagram)
    complex_ = build_coxeter_complex(diagram)
    header = f"C({diagram.name}): {len(complex_.vertex_types)} vertices, {len(complex_.chambers)} chambers"
    if complex_.rank == 3:
        text = format_complex(complex_.vertex_types, complex_.chambers, (), header)
    else:
        text = format_complex(complex_.vertex_types, (), complex_.chambers, header)
    write_text(text, config.output_path, sys.stdout)

    if config.output_path and complex_.coordinates:
        coords_path = sidecar_path(config.output_path, ".coords.json")
        write_text(format_coordinates(complex_.coordinates), coords_path)
        status(f"Coordinates written to {coords_path}")
    status(header, "stats")
    return 0
