from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field as PydanticField


# ==========================================
# Catalog
# ==========================================

class FamilyResponse(BaseModel):
    family: str
    claimed_class: str
    all_compact: bool
    finite: bool
    order: str
    way_below: str
    sup: str


class WayBelowRequest(BaseModel):
    family: str
    x: str
    y: str
    budget: Optional[int] = PydanticField(default=None, gt=0)


class SupRequest(BaseModel):
    family: str
    # "ramp r", "sqrt2", "counting", "capped cap", or explicit terms
    chain: str = "ramp 1"
    terms: List[str] = []
    budget: Optional[int] = PydanticField(default=None, gt=0)


class VerdictResponse(BaseModel):
    verdict: str
    budget_spent: int
    reason: str = ""
    witness: Any = None


class SupResponse(BaseModel):
    status: str
    value: Optional[str] = None
    budget_spent: int
    reason: str = ""


# ==========================================
# Reports
# ==========================================

class CheckResponse(BaseModel):
    property: str
    status: str
    witness: Any = None
    detail: str = ""


class ReportResponse(BaseModel):
    subject: str
    status: str
    summary: str
    exhaustive: bool
    budget_spent: int
    checks: List[CheckResponse]
    notes: List[str] = []


class ClassificationResponse(BaseModel):
    family: str
    summary: str
    precu: ReportResponse
    c: ReportResponse
    cu: ReportResponse


class CommandResult(BaseModel):
    command: str
    verdict: str
    expected: Optional[str] = None
    exit_code: int
    report: Dict[str, Any] = {}
    error: Optional[Dict[str, Any]] = None
    run_id: Optional[int] = None


class SpecRunResponse(BaseModel):
    document: Dict[str, Any]
    results: List[CommandResult]
    exit_code: int


class SpecValidationResponse(BaseModel):
    valid: bool
    document: Optional[Dict[str, Any]] = None


# ==========================================
# Run archive
# ==========================================

class RunResponse(BaseModel):
    id: int
    command: str
    target: Optional[str] = None
    verdict: str
    exit_code: int
    budget: int
    created_at: datetime

    class Config:
        from_attributes = True


class RunDetailResponse(RunResponse):
    report: Dict[str, Any]
