# app/repositories/schedule_repo.py

from pathlib import Path

from app.protocols.base import StaticSchedule
from app.repositories.transcript_repo import read_jsonl, write_jsonl


def write_schedule(schedule: StaticSchedule, path: str | Path) -> None:
    write_jsonl(schedule.records(), path)


def read_schedule(path: str | Path, length: int) -> StaticSchedule:
    records = sorted(read_jsonl(path), key=lambda r: r["node"])
    return StaticSchedule(length=length, rounds=tuple(tuple(r["rounds"]) for r in records))
