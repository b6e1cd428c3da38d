"""Plain-text report tables and tab-separated record output."""

from __future__ import annotations

import math
from typing import Mapping, Sequence

__all__ = ["format_value", "format_table", "format_records"]


def format_value(value: object) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isnan(value):
            return "-"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.6g}"
    return str(value)


def _columns(
    rows: Sequence[Mapping[str, object]], columns: Sequence[str] | None
) -> list[str]:
    if columns is not None:
        return list(columns)
    cols: list[str] = []
    for row in rows:
        cols.extend(k for k in row if k not in cols)
    return cols


def format_table(
    rows: Sequence[Mapping[str, object]], columns: Sequence[str] | None = None
) -> str:
    """Align *rows* under a header; numbers right-aligned, text left-aligned."""
    cols = _columns(rows, columns)
    cells = [[format_value(r.get(c, "")) for c in cols] for r in rows]
    widths = [
        max([len(c)] + [len(line[i]) for line in cells]) for i, c in enumerate(cols)
    ]
    numeric = [
        all(
            isinstance(r.get(c), (int, float)) and not isinstance(r.get(c), bool)
            for r in rows
        )
        for c in cols
    ]

    def fmt(values: Sequence[str]) -> str:
        parts = [
            v.rjust(w) if num else v.ljust(w)
            for v, w, num in zip(values, widths, numeric)
        ]
        return "  ".join(parts).rstrip()

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([fmt(cols), rule, *(fmt(line) for line in cells)]) + "\n"


def format_records(
    rows: Sequence[Mapping[str, object]], columns: Sequence[str] | None = None
) -> str:
    """Header line, then one tab-separated record per row."""
    cols = _columns(rows, columns)
    lines = ["\t".join(cols)]
    for r in rows:
        lines.append("\t".join(_record_value(r.get(c, "")) for c in cols))
    return "\n".join(lines) + "\n"


def _record_value(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return format_value(value)
