# app/repositories/transcript_repo.py

import json
from pathlib import Path
from typing import Iterable


def write_jsonl(records: Iterable[dict], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def history_records(histories) -> Iterable[dict]:
    """Receive events as {"node", "round", "payload": hex}, ordered by (node, round)."""
    for v, events in enumerate(histories):
        for r, payload in events:
            yield {"node": v, "round": r, "payload": payload.hex()}


def histories_from_records(records: list[dict], n: int) -> list[list[tuple[int, bytes]]]:
    histories: list[list[tuple[int, bytes]]] = [[] for _ in range(n)]
    for record in sorted(records, key=lambda r: (r["node"], r["round"])):
        histories[record["node"]].append((record["round"], bytes.fromhex(record["payload"])))
    return histories
