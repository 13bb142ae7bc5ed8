"""Deterministic text output for reports.

CSV floats are written with 17 significant digits, '.' as decimal separator
and '\\n' line endings so identical inputs give identical bytes.
"""

import csv
import io
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from pydantic import BaseModel

from .exceptions import config_error


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ";".join(format_cell(item) for item in value)
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])
    return buffer.getvalue()


def render_json(document: BaseModel) -> str:
    return document.model_dump_json(indent=2, by_alias=True) + "\n"


def write_text(text: str, path: Optional[Path]) -> None:
    """Write to path, or to standard output when no path is given."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise config_error(f"Cannot write output {path}: {e}") from e
