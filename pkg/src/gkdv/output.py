"""Deterministic CSV/JSON serialization.

All numeric output is written with 17 significant digits, which round-trips
double precision exactly, so identical configs produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path


def format_float(x: float) -> str:
    """17-significant-digit representation; round-trip exact for doubles."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numeric output")
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".17g")


def _json_fragment(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            # bare inf/nan are not valid JSON; encode as strings
            return f'"{format_float(obj)}"'
        return format_float(obj)
    if isinstance(obj, str):
        # JSON string escaping for the characters that can occur in our output.
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {type(key).__name__}")
            items.append(f'{pad}"{key}": {_json_fragment(obj[key], indent, level + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + closing_pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_json_fragment(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + closing_pad + "]"
    # numpy scalars and similar duck types
    if hasattr(obj, "item"):
        return _json_fragment(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj, indent: int = 2) -> str:
    """Sorted-keys JSON text with .17g floats and a trailing newline."""
    return _json_fragment(obj, indent, 0) + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(canonical_json(obj), encoding="utf-8")


def write_csv(path: Path, header: list[str], rows) -> None:
    """Plain comma-separated output; floats formatted with .17g.

    Unix newlines regardless of platform, header first.
    """
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, int) and not isinstance(cell, bool):
                cells.append(str(cell))
            else:
                cells.append(format_float(cell))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
