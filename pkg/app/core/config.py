# app/core/config.py - resource caps and default radii

import os
from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"⚠️  Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def _env_bool(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


TOOL_VERSION = "1.0.0"
REPORT_SCHEMA_VERSION = "1"

# Enumeration guards
GROUP_CAP = _env_int("CAT1_GROUP_CAP", 10000)
BALL_CHAMBER_CAP = _env_int("CAT1_BALL_CHAMBER_CAP", 20000)
CYCLE_LIMIT = _env_int("CAT1_CYCLE_LIMIT", 10000)

# Ball radii
RADIUS_B3 = _env_int("CAT1_RADIUS_B3", 3)
RADIUS_A5 = _env_int("CAT1_RADIUS_A5", 2)
SEARCH_RADIUS = _env_int("CAT1_SEARCH_RADIUS", 2)

DEFAULT_SEED = _env_int("CAT1_SEED", 0)
QUIET = _env_bool("CAT1_QUIET")

# Tolerances
ANALYTIC_TOL = 1e-12
GEOMETRIC_TOL = 1e-9
