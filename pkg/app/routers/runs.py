import json
from typing import List

from fastapi import APIRouter, Depends, HTTPException, Query
from sqlmodel import Session, select, desc

from app.database import get_db
from app.models.run import RunRecord
from app.schemas import RunDetailResponse, RunResponse

router = APIRouter(tags=["Run archive"])


# 1. archived runs, newest first
@router.get("/runs", response_model=List[RunResponse])
def list_runs(
        command: str = Query(default=None),
        limit: int = Query(default=50, gt=0, le=500),
        db: Session = Depends(get_db)
):
    statement = select(RunRecord)
    if command:
        statement = statement.where(RunRecord.command == command)
    statement = statement.order_by(desc(RunRecord.created_at), desc(RunRecord.id)).limit(limit)
    return db.exec(statement).all()


# 2. one run with its report
@router.get("/runs/{run_id}", response_model=RunDetailResponse)
def get_run(run_id: int, db: Session = Depends(get_db)):
    record = db.get(RunRecord, run_id)
    if not record:
        raise HTTPException(status_code=404, detail={"code": "NotFound", "message": f"run {run_id} not found"})
    data = record.model_dump()
    data["report"] = json.loads(record.report)
    return data
