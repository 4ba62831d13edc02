from fractions import Fraction
from typing import List, Optional

from fastapi import APIRouter, Depends, HTTPException, Query
from sqlmodel import Session

from app.database import get_db
from app.schemas import (
    ClassificationResponse,
    FamilyResponse,
    ReportResponse,
    SupRequest,
    SupResponse,
    VerdictResponse,
    WayBelowRequest,
)
from app.services.catalog import (
    LinearFamily,
    capped_chain,
    catalog_handles,
    counting_chain,
    family_handle,
    family_rules,
    parse_value,
    ramp_chain,
    sqrt2_chain,
)
from app.services.core_order import Chain, classify, render, resolve_budget, sup_chain, way_below
from app.services.errors import ParseError, PrecuError, ValidationError
from app.services.indlimits import counterexample_suite
from app.utils.logger import log_run

router = APIRouter(tags=["Catalog"])


def to_http_error(e: PrecuError) -> HTTPException:
    """Domain errors are 400, malformed input 422."""
    status = 422 if isinstance(e, (ParseError, ValidationError)) else 400
    return HTTPException(status_code=status, detail=e.to_dict())


def _element(handle, text: str):
    try:
        return parse_value(handle, text)
    except (ValueError, TypeError) as e:
        raise HTTPException(status_code=422, detail={"code": "ValueError", "message": str(e)})


def _named_chain(handle, spec: str) -> Chain:
    if not isinstance(handle, LinearFamily):
        raise HTTPException(status_code=400, detail={"code": "NoRule", "message": "named chains need a linear family"})
    name, _, arg = spec.strip().partition(" ")
    try:
        arg = Fraction(arg.strip()) if arg.strip() else 1
    except (ValueError, ZeroDivisionError):
        raise HTTPException(status_code=422, detail={"code": "ValueError", "message": f"bad chain argument in '{spec}'"})
    if name == "ramp":
        return ramp_chain(handle, arg)
    if name == "sqrt2":
        return sqrt2_chain(handle)
    if name == "counting":
        return counting_chain(handle)
    if name == "capped":
        return capped_chain(handle, arg)
    raise HTTPException(status_code=422, detail={"code": "ValueError", "message": f"unknown chain '{spec}'"})


# ==========================================
# 1. Families and their rules
# ==========================================
@router.get("/families", response_model=List[FamilyResponse])
def list_families():
    return [family_rules(h.family_id).to_dict() for h in catalog_handles()]


@router.get("/families/{family_id}", response_model=FamilyResponse)
def get_family(family_id: str):
    try:
        return family_rules(family_id).to_dict()
    except PrecuError as e:
        raise to_http_error(e)


# ==========================================
# 2. Queries
# ==========================================
@router.post("/way-below", response_model=VerdictResponse)
def query_way_below(data: WayBelowRequest):
    try:
        handle = family_handle(data.family)
        x, y = _element(handle, data.x), _element(handle, data.y)
        verdict = way_below(handle, x, y, data.budget)
    except PrecuError as e:
        raise to_http_error(e)
    return VerdictResponse(
        verdict=verdict.verdict.value,
        budget_spent=verdict.budget_spent,
        reason=verdict.reason,
        witness=render(verdict.witness, handle),
    )


@router.post("/sup", response_model=SupResponse)
def query_sup(data: SupRequest):
    try:
        handle = family_handle(data.family)
        if data.terms:
            chain = Chain.finite([_element(handle, t) for t in data.terms], label="terms")
        else:
            chain = _named_chain(handle, data.chain)
        verdict = sup_chain(handle, chain, data.budget)
    except PrecuError as e:
        raise to_http_error(e)
    return SupResponse(
        status=verdict.status.value,
        value=handle.format(verdict.value) if verdict.found else None,
        budget_spent=verdict.budget_spent,
        reason=verdict.reason,
    )


@router.get("/families/{family_id}/classify", response_model=ClassificationResponse)
def classify_family(
        family_id: str,
        budget: Optional[int] = Query(default=None, gt=0),
        db: Session = Depends(get_db)
):
    try:
        result = classify(family_handle(family_id), budget)
    except PrecuError as e:
        raise to_http_error(e)
    tree = result.to_dict()
    log_run(db, "classify", result.cu.summary_word(), tree, resolve_budget(budget), target=family_id)
    return tree


# ==========================================
# 3. Counterexample suite
# ==========================================
@router.get("/counterexample", response_model=ReportResponse)
def run_counterexample(
        budget: Optional[int] = Query(default=None, gt=0),
        db: Session = Depends(get_db)
):
    report = counterexample_suite(budget)
    tree = report.to_dict()
    log_run(db, "counterexample", report.summary_word(), tree, resolve_budget(budget),
            exit_code=0 if report.passed else 1)
    return tree
