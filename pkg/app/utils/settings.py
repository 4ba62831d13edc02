import os
from fractions import Fraction

from pydantic import BaseModel


class Settings(BaseModel):
    budget: int = 64
    ideal_cap: int = 12
    map_search_cap: int = 1_000_000
    grid_step: Fraction = Fraction(1, 10)
    grid_cap: Fraction = Fraction(3)
    perforation_cap: int = 4
    database_url: str = "sqlite:///./precu.db"
    sql_echo: bool = False

    model_config = {"arbitrary_types_allowed": True}


# read from the environment, falling back to defaults
settings = Settings(
    budget=int(os.getenv("PRECU_BUDGET", 64)),
    ideal_cap=int(os.getenv("PRECU_IDEAL_CAP", 12)),
    map_search_cap=int(os.getenv("PRECU_MAP_SEARCH_CAP", 1_000_000)),
    grid_step=Fraction(os.getenv("PRECU_GRID_STEP", "1/10")),
    grid_cap=Fraction(os.getenv("PRECU_GRID_CAP", "3")),
    perforation_cap=int(os.getenv("PRECU_PERFORATION_CAP", 4)),
    database_url=os.getenv("DATABASE_URL", "sqlite:///./precu.db"),
    sql_echo=os.getenv("PRECU_SQL_ECHO", "false").lower() in ("1", "true", "yes"),
)
