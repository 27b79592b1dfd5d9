"""Reference table fixture and CSV helpers."""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path

TABLE_ROWS = 370
REAL_FORMAT = ".12g"


def default_table_path() -> Path:
    return Path(str(resources.files("besicovitch") / "data" / "table1.csv"))


def default_tags_path() -> Path:
    return Path(str(resources.files("besicovitch") / "data" / "table1_tags.csv"))


def load_table(path: str | Path | None = None, strict: bool = True) -> dict[int, int]:
    """Read a ``d,C_d`` fixture; with ``strict`` the row count must be 370."""
    path = Path(path) if path else default_table_path()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["d", "C_d"]:
            raise ValueError(f"{path}: expected header d,C_d, got {','.join(header)}")
        table = {}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields")
            d, c = int(row[0]), int(row[1])
            if d in table:
                raise ValueError(f"{path}:{lineno}: duplicate d={d}")
            table[d] = c
    if strict and len(table) != TABLE_ROWS:
        raise ValueError(f"{path}: expected {TABLE_ROWS} rows, got {len(table)}")
    return table


def load_tags(path: str | Path | None = None) -> dict[int, str]:
    path = Path(path) if path else default_tags_path()
    with open(path, newline="", encoding="utf-8") as fh:
        return {int(r["d"]): r["tag"] for r in csv.DictReader(fh)}


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, REAL_FORMAT)
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"), sort_keys=True)
    return str(v)


def rows_to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def read_csv(text_or_path) -> list[dict[str, str]]:
    if isinstance(text_or_path, Path) or (
        isinstance(text_or_path, str) and "\n" not in text_or_path
    ):
        text = Path(text_or_path).read_text(encoding="utf-8")
    else:
        text = text_or_path
    return list(csv.DictReader(io.StringIO(text)))
