"""Reading the canonical sweep CSV.

The sensing toolkit emits one CSV per sweep with a fixed seven-column
header; this module is the only place the plotter touches those files.
Anything that does not look like a complete sweep (missing file, wrong
header, fewer than two data rows, unparsable numbers) raises
``CsvFormatError`` so the command line can refuse loudly instead of
drawing something misleading.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["CANONICAL_HEADER", "CsvFormatError", "SweepTable", "read_sweep_csv"]

CANONICAL_HEADER = (
    "theta0",
    "delta_c",
    "delta_q",
    "Delta_c",
    "Delta_q",
    "stable",
    "singular",
)

# two points is the bare minimum that still draws a line segment
MIN_ROWS = 2


class CsvFormatError(ValueError):
    """A sweep CSV that is missing, truncated, or malformed."""


@dataclass(frozen=True)
class SweepTable:
    """One parsed sweep: a theta0 grid and the four error columns."""

    path: Path
    theta0: np.ndarray
    columns: dict[str, np.ndarray]
    stable: bool
    singular: bool

    def column(self, key: str) -> np.ndarray:
        if key == "theta0":
            return self.theta0
        try:
            return self.columns[key]
        except KeyError:
            raise KeyError(
                f"unknown column {key!r}; have {sorted(self.columns)}"
            ) from None


def read_sweep_csv(path: Path | str) -> SweepTable:
    path = Path(path)
    if not path.is_file():
        raise CsvFormatError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    if tuple(rows[0]) != CANONICAL_HEADER:
        raise CsvFormatError(
            f"{path}: header {','.join(rows[0])!r} is not the canonical "
            f"sweep header {','.join(CANONICAL_HEADER)!r}"
        )
    data = rows[1:]
    if len(data) < MIN_ROWS:
        raise CsvFormatError(
            f"{path}: {len(data)} data row(s); a sweep needs at least {MIN_ROWS}"
        )
    try:
        values = np.array(
            [[float(v) for v in row[:5]] for row in data], dtype=float
        )
        flags = {(row[5], row[6]) for row in data}
    except (ValueError, IndexError) as exc:
        raise CsvFormatError(f"{path}: unparsable data row ({exc})") from exc
    if len(flags) != 1 or not flags <= {("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")}:
        raise CsvFormatError(f"{path}: inconsistent stable/singular flags")
    theta0 = values[:, 0]
    if not np.all(np.isfinite(theta0)) or np.any(theta0 <= 0):
        raise CsvFormatError(f"{path}: theta0 must be finite and positive")
    if np.any(np.diff(theta0) <= 0):
        raise CsvFormatError(f"{path}: theta0 must increase strictly")
    ((s_flag, g_flag),) = flags
    columns = {
        name: values[:, i] for i, name in enumerate(CANONICAL_HEADER[1:5], start=1)
    }
    return SweepTable(
        path=path,
        theta0=theta0,
        columns=columns,
        stable=s_flag == "1",
        singular=g_flag == "1",
    )
