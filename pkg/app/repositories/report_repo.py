# app/repositories/report_repo.py

import sys
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd


def render_csv(frame: pd.DataFrame, timestamp: bool = True) -> str:
    """
    UTF-8 CSV with a header row. With `timestamp`, a leading
    `# generated <iso time>` line precedes the header.
    """
    body = frame.to_csv(index=False, lineterminator="\n")
    if not timestamp:
        return body
    stamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return f"# generated {stamp}\n{body}"


def write_csv(frame: pd.DataFrame, path: str | Path | None, timestamp: bool = True) -> str:
    """Writes to `path`, or to stdout when path is None or "-"; returns the text."""
    text = render_csv(frame, timestamp)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_csv(path: str | Path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
