# app/schemas/reports.py

from pydantic import BaseModel, ConfigDict, Field


class _Row(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    graph: str
    delta: int = Field(..., alias="Δ")
    n: int
    T: int
    p: float


# --------------------------------------------------
# PER-RUN ROWS (one schema per simulator)
# --------------------------------------------------
class ProgressRow(_Row):
    seed: int
    max_completion_round: int
    verified: bool


class StaticRow(_Row):
    c1: int
    c3: int
    cQ: int
    seed: int
    total_rounds: int
    verified: bool
    max_window_spread: int


class GeneralRow(_Row):
    c4: int
    c5: int
    seed: int
    total_rounds: int
    verified: bool


class RepeatRow(_Row):
    c_rep: int
    seed: int
    total_rounds: int
    verified: bool


ROW_SCHEMAS = {
    "progress": ProgressRow,
    "static": StaticRow,
    "general": GeneralRow,
    "repeat": RepeatRow,
}


def columns(sim: str) -> list[str]:
    return [f.alias or name for name, f in ROW_SCHEMAS[sim].model_fields.items()]
