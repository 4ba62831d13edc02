from datetime import datetime
from typing import Optional
from sqlmodel import SQLModel, Field


class RunRecord(SQLModel, table=True):
    __tablename__ = "runs"

    id: Optional[int] = Field(default=None, primary_key=True)

    command: str = Field(index=True)  # check, classify, complete, ...
    target: Optional[str] = None      # monoid / system / model name
    verdict: str                      # pass, evidence-pass, disproof, unknown, error
    exit_code: int = 0
    budget: int

    report: str  # JSON report tree

    created_at: datetime = Field(default_factory=datetime.now)
