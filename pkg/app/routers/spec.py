from typing import Optional

from fastapi import APIRouter, Depends, File, Form, UploadFile
from sqlmodel import Session

from app.database import get_db
from app.routers.catalog import to_http_error
from app.schemas import SpecRunResponse, SpecValidationResponse
from app.services.commands import exit_code, run_commands
from app.services.errors import PrecuError
from app.services.spec_format import parse_spec
from app.utils.logger import log_run

router = APIRouter(tags=["Spec files"])


async def _read(file: UploadFile) -> str:
    content = await file.read()
    return content.decode("utf-8")


# ==========================================
# 1. Validate an uploaded spec file
# ==========================================
@router.post("/spec/validate", response_model=SpecValidationResponse)
async def validate_spec(file: UploadFile = File(...)):
    text = await _read(file)
    try:
        doc = parse_spec(text, source=file.filename or "<upload>")
    except PrecuError as e:
        raise to_http_error(e)
    return SpecValidationResponse(valid=True, document=doc.to_dict())


# ==========================================
# 2. Run the [run] block and archive every result
# ==========================================
@router.post("/spec/run", response_model=SpecRunResponse)
async def run_spec(
        file: UploadFile = File(...),
        budget: Optional[int] = Form(default=None),
        db: Session = Depends(get_db)
):
    text = await _read(file)
    try:
        doc = parse_spec(text, source=file.filename or "<upload>")
    except PrecuError as e:
        raise to_http_error(e)

    results = run_commands(doc, budget)
    out = []
    for r in results:
        entry = r.to_dict()
        record = log_run(
            db,
            r.command.name,
            r.verdict,
            entry,
            r.report.get("budget", budget or 0),
            target=r.command.target,
            exit_code=r.exit_code
        )
        entry["run_id"] = record.id
        out.append(entry)
    return SpecRunResponse(document=doc.to_dict(), results=out, exit_code=exit_code(results))
