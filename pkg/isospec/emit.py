"""Deterministic CSV and JSON artifacts.

Reals are written with 17 significant digits so a value read back is the
value that was written; dictionaries keep insertion order. JSON writes
non-finite reals as null, CSV as NaN or Infinity.
"""

import csv
import io
import json
import logging
import os
import sys
from enum import Enum
from typing import Optional

import numpy as np

from isospec.errors import OutputError
from isospec.models import Table, VerificationReport

logger = logging.getLogger(__name__)


def format_real(value) -> str:
    """17 significant digits; non-finite values as the tokens NaN, Infinity, -Infinity."""
    value = float(value)
    if not np.isfinite(value):
        return json.dumps(value)
    return "%.17g" % value


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return ";".join(_cell(v) for v in value)
    if isinstance(value, dict):
        return to_json(value, indent=None)
    return str(value)


def _plain(value):
    if isinstance(value, VerificationReport):
        return value.to_dict()
    if isinstance(value, Table):
        return {"columns": list(value.columns), "rows": [list(row) for row in value.rows], **value.extra}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def to_json(value, indent: Optional[int] = 2, level: int = 0) -> str:
    """JSON text with reals at 17 significant digits and non-finite reals as null."""
    value = _plain(value)
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    close = "" if indent is None else "\n" + " " * (indent * level)
    separator = ", " if indent is None else ","
    if value is None or isinstance(value, (bool, np.bool_)):
        return json.dumps(None if value is None else bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # strict JSON has no NaN or Infinity
        return format_real(value) if np.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {to_json(v, indent, level + 1)}" for k, v in value.items()]
        return "{" + separator.join(items) + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + to_json(v, indent, level + 1) for v in value]
        return "[" + separator.join(items) + close + "]"
    return json.dumps(str(value), ensure_ascii=False)


def _reports_table(reports) -> Table:
    rows = tuple(
        (r.check_id, r.verdict.value, r.tolerance, to_json(r.measured, indent=None), r.provenance) for r in reports
    )
    return Table(("check_id", "verdict", "tolerance", "measured", "provenance"), rows)


def render(payload, fmt: str = "csv") -> str:
    """Text of a Table, a report, a list of reports or a plain mapping."""
    if isinstance(payload, VerificationReport):
        payload = [payload]
    if fmt == "json":
        if isinstance(payload, list):
            payload = {"reports": payload}
        return to_json(payload) + "\n"
    if isinstance(payload, list):
        payload = _reports_table(payload)
    if isinstance(payload, dict):
        payload = Table(("key", "value"), tuple((k, v) for k, v in payload.items()))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(payload.columns)
    for row in payload.rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def emit(payload, fmt: str = "csv", path: Optional[str] = None):
    """Write ``payload`` to ``path`` (stdout when None or "-").

    Raises:
        OutputError: if the parent directory is missing or the file is unwritable
    """
    text = render(payload, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise OutputError(f"output directory {parent} does not exist")
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"wrote {fmt} output to {path}")
