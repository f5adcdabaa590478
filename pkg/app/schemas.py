from pydantic import BaseModel, Field, validator
from typing import Optional, List, Dict, Any
from enum import Enum

from app.core import config

# =================
# ENUMS
# =================


class ConditionStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class Outcome(str, Enum):
    CONSISTENT = "consistent"
    VIOLATION = "violation"
    INCONCLUSIVE = "inconclusive"


class Subcommand(str, Enum):
    TABLES = "tables"
    COXETER = "coxeter"
    CHECK = "check"
    BALL = "ball"
    VERIFY_PAPER = "verify-paper"
    LUNES = "lunes"
    WORD = "word"


def combine_statuses(statuses: List[ConditionStatus]) -> ConditionStatus:
    """fail beats inconclusive beats pass"""
    if ConditionStatus.FAIL in statuses:
        return ConditionStatus.FAIL
    if ConditionStatus.INCONCLUSIVE in statuses:
        return ConditionStatus.INCONCLUSIVE
    return ConditionStatus.PASS


EXIT_CODES = {
    ConditionStatus.PASS: 0,
    ConditionStatus.FAIL: 1,
    ConditionStatus.INCONCLUSIVE: 2,
}
EXIT_INVALID_INPUT = 3


# =================
# RUN CONFIGURATION
# =================


class RunConfig(BaseModel):
    subcommand: Subcommand
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    diagram: Optional[str] = None
    radius: Optional[int] = Field(None, ge=0)
    radius_b3: int = Field(default=config.RADIUS_B3, ge=0)
    radius_a5: int = Field(default=config.RADIUS_A5, ge=0)
    search_radius: int = Field(default=config.SEARCH_RADIUS, ge=0)
    induced: bool = False
    json_output: bool = False
    seed: int = config.DEFAULT_SEED
    cycle_limit: int = Field(default=config.CYCLE_LIMIT, gt=0)

    @validator("diagram")
    def validate_diagram(cls, v):
        if v is not None:
            v = v.strip().upper()
        return v


# =================
# CONDITION REPORTS
# =================


class Witness(BaseModel):
    kind: str
    vertices: List[str] = []
    detail: str = ""


class ConditionResult(BaseModel):
    condition: int = Field(..., ge=1, le=6)
    title: str
    status: ConditionStatus
    checked: int = 0
    certified: int = 0
    inconclusive: int = 0
    witnesses: List[Witness] = []
    notes: List[str] = []


class Diagnostics(BaseModel):
    flag: bool
    flag_witness: Optional[List[str]] = None
    star_intersections: Dict[str, int] = {}


class CheckReport(BaseModel):
    schema_version: str = config.REPORT_SCHEMA_VERSION
    tool_version: str = config.TOOL_VERSION
    verdict: ConditionStatus
    conditions: Dict[str, ConditionResult]
    diagnostics: Optional[Diagnostics] = None
    meta: Dict[str, Any] = {}

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


# =================
# TABLES
# =================


class TripleRow(BaseModel):
    n_alpha: int = Field(..., ge=0)
    n_beta: int = Field(..., ge=0)
    n_delta: int = Field(..., ge=0)
    weighted_sum: float


class TablesReport(BaseModel):
    schema_version: str = config.REPORT_SCHEMA_VERSION
    tool_version: str = config.TOOL_VERSION
    short_triples: List[TripleRow]
    reduced_triples: List[TripleRow]


# =================
# VERIFICATION SUITE
# =================


class InjectivityReport(BaseModel):
    max_len: int
    positive_elements: int
    elements: int
    images: int
    collisions: int


class CheckOutcome(BaseModel):
    name: str
    status: ConditionStatus
    counts: Dict[str, int] = {}
    detail: List[str] = []


class VerificationReport(BaseModel):
    schema_version: str = config.REPORT_SCHEMA_VERSION
    tool_version: str = config.TOOL_VERSION
    verdict: ConditionStatus
    checks: List[CheckOutcome]
    config: Dict[str, Any] = {}

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
