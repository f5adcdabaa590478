import json

import pytest
from pydantic import ValidationError

from app.core import config
from app.schemas import (
    EXIT_CODES,
    CheckReport,
    ConditionResult,
    ConditionStatus,
    RunConfig,
    Subcommand,
    combine_statuses,
)

PASS, FAIL, INCONCLUSIVE = ConditionStatus.PASS, ConditionStatus.FAIL, ConditionStatus.INCONCLUSIVE


def test_combine_statuses():
    assert combine_statuses([]) == PASS
    assert combine_statuses([PASS, INCONCLUSIVE]) == INCONCLUSIVE
    assert combine_statuses([INCONCLUSIVE, FAIL, PASS]) == FAIL
    assert [EXIT_CODES[s] for s in (PASS, FAIL, INCONCLUSIVE)] == [0, 1, 2]


def test_run_config_defaults_and_validation():
    run = RunConfig(subcommand=Subcommand.BALL, diagram=" b3 ", radius=2)
    assert run.diagram == "B3"
    assert run.radius_b3 == config.RADIUS_B3
    assert run.search_radius == config.SEARCH_RADIUS
    with pytest.raises(ValidationError):
        RunConfig(subcommand=Subcommand.BALL, radius=-1)
    with pytest.raises(ValidationError):
        RunConfig(subcommand=Subcommand.CHECK, cycle_limit=0)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="draw")


def test_report_json_carries_versions():
    result = ConditionResult(condition=1, title="links connected", status=PASS)
    report = CheckReport(verdict=PASS, conditions={"1": result})
    payload = json.loads(report.to_json())
    assert payload["schema_version"] == config.REPORT_SCHEMA_VERSION
    assert payload["tool_version"] == config.TOOL_VERSION
    assert payload["conditions"]["1"]["status"] == "pass"
    with pytest.raises(ValidationError):
        ConditionResult(condition=7, title="no such condition", status=PASS)


def test_env_parsing(monkeypatch):
    monkeypatch.setenv("CAT1_TEST_INT", "17")
    assert config._env_int("CAT1_TEST_INT", 3) == 17
    monkeypatch.setenv("CAT1_TEST_INT", "seventeen")
    assert config._env_int("CAT1_TEST_INT", 3) == 3
    monkeypatch.setenv("CAT1_TEST_INT", " ")
    assert config._env_int("CAT1_TEST_INT", 3) == 3
    monkeypatch.setenv("CAT1_TEST_BOOL", "Yes")
    assert config._env_bool("CAT1_TEST_BOOL") is True
    monkeypatch.delenv("CAT1_TEST_BOOL")
    assert config._env_bool("CAT1_TEST_BOOL", True) is True
