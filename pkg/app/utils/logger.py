import json
from typing import Optional

from sqlmodel import Session

from app.models.run import RunRecord


def log_run(
        db: Session,
        command: str,
        verdict: str,
        report: dict,
        budget: int,
        target: Optional[str] = None,
        exit_code: int = 0
) -> RunRecord:
    """
    Archive one run report in the database.
    """
    record = RunRecord(
        command=command,
        target=target,
        verdict=verdict,
        exit_code=exit_code,
        budget=budget,
        report=json.dumps(report, sort_keys=True, default=str, ensure_ascii=False)
    )
    db.add(record)
    db.commit()
    db.refresh(record)
    return record
