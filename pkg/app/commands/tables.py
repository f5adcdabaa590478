# app/commands/tables.py - short-loop type tables

import sys

from app.commands import add_output_flags
from app.schemas import RunConfig, Subcommand, TablesReport, TripleRow
from app.services.cat1_checker import Triple, enumerate_short_triples, reduce_triples
from app.utils.complex_io import write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("tables", help="list the short and reduced (n_alpha, n_beta, n_delta) triples")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _row(triple: Triple) -> TripleRow:
    return TripleRow(
        n_alpha=triple.n_alpha,
        n_beta=triple.n_beta,
        n_delta=triple.n_delta,
        weighted_sum=round(triple.weighted_sum(), 12),
    )


def format_tables(report: TablesReport) -> str:
    lines = []
    for title, rows in (("Short triples", report.short_triples), ("Reduced triples", report.reduced_triples)):
        lines.append(f"{title} ({len(rows)}):")
        lines.append("  n_alpha n_beta n_delta  n_alpha*alpha + n_beta*beta + n_delta*delta")
        for row in rows:
            lines.append(f"  {row.n_alpha:7d} {row.n_beta:6d} {row.n_delta:7d}  {row.weighted_sum:.6f}")
        lines.append("")
    return "\n".join(lines)


def run(args) -> int:
    config = RunConfig(subcommand=Subcommand.TABLES, output_path=args.output_path, json_output=args.json_output)
    short = enumerate_short_triples()
    report = TablesReport(
        short_triples=[_row(t) for t in short],
        reduced_triples=[_row(t) for t in reduce_triples(short)],
    )
    text = report.model_dump_json(indent=2) + "\n" if config.json_output else format_tables(report)
    write_text(text, config.output_path, sys.stdout)
    return 0
