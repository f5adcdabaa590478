# app/main.py - command-line entry point

import argparse
import sys
import traceback

from pydantic import ValidationError

from app.commands import load_commands
from app.core import config
from app.core.console import detail, status
from app.core.errors import INPUT_ERRORS, THEOREM_VIOLATIONS, Cat1Error, InvalidComplexError
from app.schemas import EXIT_INVALID_INPUT


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the invalid-input code, not argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        status(message, "fail")
        raise SystemExit(EXIT_INVALID_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cat1",
        description="CAT(1) criterion checks for B3 complexes and the Artin complexes D(B3), D(A5)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    load_commands(subparsers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except THEOREM_VIOLATIONS as e:
        status(f"Theorem violation: {e}", "fail")
        return 1
    except INPUT_ERRORS as e:
        status(f"Invalid input: {e}", "fail")
        if isinstance(e, InvalidComplexError):
            for violation in e.violations[:10]:
                detail(f"{violation.kind.value}: {violation.message}")
        return EXIT_INVALID_INPUT
    except ValidationError as e:
        status(f"Invalid arguments: {e.errors()[0]['msg']}", "fail")
        return EXIT_INVALID_INPUT
    except Cat1Error as e:
        status(str(e), "fail")
        return EXIT_INVALID_INPUT
    except Exception as e:
        status(f"Unexpected error: {e}", "fail")
        traceback.print_exc()
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
