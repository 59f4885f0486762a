"""Report emission: JSON documents with a replay header, CSV tables for plots."""

import csv
import io
import json
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel

from ngspread import __version__
from ngspread.models import Invocation

CSV_ZERO_TOL = 1e-9

Row = Union[BaseModel, Dict[str, Any]]


def format_number(value: Any) -> str:
    """'.' decimal with 9 significant digits; magnitudes below 1e-9 print as 0."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if abs(value) < CSV_ZERO_TOL:
            return "0"
        return f"{value:.9g}"
    if isinstance(value, (list, tuple)):
        return ";".join(format_number(item) for item in value)
    return str(value)


def report_header(inv: Invocation) -> Dict[str, Any]:
    """Replay header. The worker count is omitted: reports never depend on it."""
    return {
        "tool": "ngspread",
        "version": __version__,
        "subcommand": inv.subcommand.value,
        "seed": inv.seed,
        "flags": {key: _plain(value) for key, value in sorted(inv.flags.items())},
    }


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def render_json(header: Dict[str, Any], payload: Any) -> str:
    document = {"header": header, "report": _plain(payload)}
    return json.dumps(document, indent=2) + "\n"


def _as_dict(row: Row) -> Dict[str, Any]:
    return row.model_dump() if isinstance(row, BaseModel) else dict(row)


def render_csv(rows: Iterable[Row], columns: Optional[Sequence[str]] = None) -> str:
    """One header line plus one line per row; lists are joined with ';'."""
    records: List[Dict[str, Any]] = [_as_dict(row) for row in rows]
    if columns is None:
        columns = list(records[0]) if records else []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([format_number(record.get(column)) for column in columns])
    return buffer.getvalue()
