"""Machine-readable result tables (CSV or JSON lines).

Output is byte-identical for identical inputs: floats are written with
their shortest round-trip decimal, unbounded radii as an empty CSV field or
JSON null, and rows keep a fixed column order.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

__all__ = ["RESULT_COLUMNS", "RADIUS_COLUMNS", "write_rows"]

RESULT_COLUMNS = (
    "pattern",
    "downtilt_deg",
    "power_mode",
    "p2_dbm",
    "ase_bps_hz_km2",
    "ase_stderr",
    "avg_rate_bps_hz",
    "rate_stderr",
    "metro_fraction",
    "cell_radius_m",
    "drops",
    "seed",
)

RADIUS_COLUMNS = (
    "pattern",
    "downtilt_deg",
    "height_m",
    "user_height_m",
    "vert_hpbw_deg",
    "cell_radius_m",
    "cell_radius_m_display",
)


def _unbounded(value) -> bool:
    return isinstance(value, float) and math.isinf(value)


def _csv_cell(value) -> str:
    if value is None or _unbounded(value):
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_cell(value):
    if _unbounded(value):
        return None
    return value


def write_rows(
    rows: list[dict],
    columns: tuple[str, ...],
    out: str | Path | None,
    fmt: str = "csv",
) -> None:
    """Write rows to ``out`` (a path, or stdout when None) as CSV or JSONL."""
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown output format {fmt!r}")

    def render(stream) -> None:
        if fmt == "csv":
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_csv_cell(row[c]) for c in columns])
        else:
            for row in rows:
                record = {c: _json_cell(row[c]) for c in columns}
                stream.write(json.dumps(record) + "\n")

    if out is None:
        render(sys.stdout)
    else:
        with open(out, "w", newline="") as stream:
            render(stream)
