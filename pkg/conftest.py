# conftest.py - shared fixtures for the test suite

import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))
os.environ.setdefault("CAT1_QUIET", "1")

from app.services.artin_complex import build_ball  # noqa: E402
from app.services.coxeter import coxeter_b3  # noqa: E402
from app.services.garside import artin_group  # noqa: E402


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return ROOT / "fixtures"


@pytest.fixture(scope="session")
def cb3():
    return coxeter_b3()


@pytest.fixture(scope="session")
def cb3_complex(cb3):
    return cb3.to_typed_complex()


@pytest.fixture(scope="session")
def b3():
    return artin_group("B3")


@pytest.fixture(scope="session")
def a5():
    return artin_group("A5")


@pytest.fixture(scope="session")
def ball_b3_r1():
    return build_ball("B3", 1)


@pytest.fixture(scope="session")
def ball_b3_r2():
    return build_ball("B3", 2)


@pytest.fixture(scope="session")
def ball_a5_r1():
    return build_ball("A5", 1)


@pytest.fixture(scope="session")
def ball_b3_r4():
    return build_ball("B3", 4)


@pytest.fixture(scope="session")
def ball_a5_r2():
    return build_ball("A5", 2)
