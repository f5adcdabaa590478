# app/commands/__init__.py - subcommand registry

import importlib
import traceback

from app.core.console import status

# module name -> subcommand it registers
COMMAND_MODULES = {
    "tables": "tables",
    "coxeter": "coxeter",
    "check": "check",
    "ball": "ball",
    "verify": "verify-paper",
    "lunes": "lunes",
    "word": "word",
}


def load_commands(subparsers) -> list:
    """Import each command module and let it register its parser"""
    loaded = []
    for module_name, command in COMMAND_MODULES.items():
        try:
            module = importlib.import_module(f"app.commands.{module_name}")
            module.register(subparsers)
            loaded.append(command)
        except ImportError as e:
            status(f"{command} command not available: {e}", "warn")
        except Exception as e:
            status(f"Unexpected error loading {command} command: {e}", "fail")
            traceback.print_exc()
    return loaded


def add_output_flags(parser, json_flag: bool = True) -> None:
    parser.add_argument("-o", "--output", dest="output_path", help="write the result here instead of stdout")
    if json_flag:
        parser.add_argument("--json", dest="json_output", action="store_true", help="machine-readable output")
