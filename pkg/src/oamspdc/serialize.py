"""CSV and JSON rendering shared by the table types and the CLI."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Mapping, Sequence


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value


def to_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    """Render records as CSV with a header row and a fixed column order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def to_json(meta: Mapping[str, Any], rows: Iterable[Mapping[str, Any]], **extra: Any) -> str:
    """Render ``{"meta": ..., "rows": [...]}`` plus any extra top-level keys."""
    doc = {"meta": dict(meta), "rows": [dict(r) for r in rows]}
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def display(value: float, digits: int = 3) -> str:
    """Fixed-point rendering used for three-decimal display columns."""
    text = f"{value:.{digits}f}"
    if text.startswith("-") and float(text) == 0:
        text = text[1:]
    return text
