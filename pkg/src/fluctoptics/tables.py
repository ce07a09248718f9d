"""CSV and JSON writers with locale-independent scientific notation."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

__all__ = ["precision_from_env", "format_number", "csv_text", "json_text", "write_text", "PRECISION_ENV"]

PRECISION_ENV = "FLUCTOPTICS_PRECISION"
DEFAULT_PRECISION = 17


def precision_from_env(environ: Mapping[str, str] = os.environ) -> int:
    raw = environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION
    try:
        digits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= digits <= 17:
        raise ValueError(f"{PRECISION_ENV} must be between 1 and 17, got {digits}")
    return digits


def format_number(x, digits: int = DEFAULT_PRECISION) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if not np.isfinite(x):
        raise ValueError(f"cannot write non-finite value {x}")
    return f"{x:.{digits - 1}e}"


def csv_text(columns: Mapping[str, Sequence], digits: int = DEFAULT_PRECISION) -> str:
    """Header row plus one row per index; all columns must have equal length."""
    names = list(columns)
    cols = [list(columns[n]) for n in names]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise ValueError("columns have different lengths")
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(format_number(v, digits) for v in row))
    return "\n".join(lines) + "\n"


def _json_value(v, digits: int, indent: int) -> str:
    pad = "  " * indent
    if isinstance(v, Mapping):
        if not v:
            return "{}"
        items = [f'{pad}  {_json_string(str(k))}: {_json_value(v[k], digits, indent + 1)}' for k in v]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x, digits, indent + 1) for x in v) + "]"
    if isinstance(v, str):
        return _json_string(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return format_number(v, digits)


def _json_string(s: str) -> str:
    return json.dumps(s)


def json_text(doc: Mapping, digits: int = DEFAULT_PRECISION) -> str:
    """JSON with floats in scientific notation (still valid JSON numbers)."""
    return _json_value(doc, digits, 0) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
