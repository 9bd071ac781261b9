"""Figure descriptions and the CSV access layer.

A FigureSpec is purely declarative: which files feed which panel, which
columns are drawn, where the image goes.  Cells are kept as raw strings
here; parsing happens at render time with plain float(), so the plotted
values are exactly the file's values (no resampling, no smoothing).

Two figure modes are supported, matching the two table families the
upstream CLI emits:

* ``fig1`` -- sequence-index plots.  Each Taylor-comparison table
  (``taylor`` subcommand) becomes one panel showing the iterated rescaled
  alpha_n as points with the order-2/3 short-range predictions as lines;
  an optional asymptote curve table (``asymptote --out``) is overlaid on
  the first panel.
* ``fig2`` -- jump-location scans.  Scan tables (``scan`` subcommand) are
  split by polynomial degree; each degree becomes one panel of
  rescaled alpha_n against the jump location, one series per input file.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

MODES = ("fig1", "fig2")

TAYLOR_COLUMNS = ("n", "rescaled_iter", "rescaled_taylor2", "rescaled_taylor3")
ASYMPTOTE_COLUMNS = ("n", "alpha_est_rescaled")
SCAN_COLUMNS = ("xjump", "n", "alpha_rescaled")


class MissingColumnError(ValueError):
    """A series references a column the CSV does not have."""

    def __init__(self, column: str, path, present: Sequence[str]):
        self.column = column
        self.path = str(path)
        super().__init__(
            f"column {column!r} not found in {path} "
            f"(file has: {', '.join(present)})"
        )


@dataclass(frozen=True)
class SeriesSpec:
    """One plotted series: two columns of one CSV, optionally row-filtered.

    ``where`` holds (column, raw cell value); rows whose cell differs are
    skipped.  The comparison is on the unparsed string, which is exact for
    the integer degree column it is used with.
    """

    path: str
    xcol: str
    ycol: str
    label: str
    style: str = "line"  # "line" | "points"
    where: Optional[Tuple[str, str]] = None

    def __post_init__(self):
        if self.style not in ("line", "points"):
            raise ValueError(
                f"style must be 'line' or 'points', got {self.style!r}"
            )


@dataclass(frozen=True)
class PanelSpec:
    title: str
    series: Tuple[SeriesSpec, ...]

    def __post_init__(self):
        if not self.series:
            raise ValueError(f"panel {self.title!r} has no series")


@dataclass(frozen=True)
class FigureSpec:
    mode: str
    csv_paths: Tuple[str, ...]
    panels: Tuple[PanelSpec, ...]
    xlabel: str
    ylabel: str
    out_path: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.csv_paths:
            raise ValueError("no input CSVs given")
        if not self.panels:
            raise ValueError("panel list is empty")


# ---------------------------------------------------------------------------
# CSV access

def read_table(path) -> Tuple[List[str], List[Dict[str, str]]]:
    """Header and raw string rows of one CSV.  No numeric parsing."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path} is empty")
        rows = list(reader)
    return list(reader.fieldnames), rows


def series_cells(
    spec: SeriesSpec, header: Sequence[str], rows: Sequence[Dict[str, str]]
) -> List[Tuple[str, str]]:
    """Raw (x, y) cell pairs for one series.

    Rows with a blank cell in either column are skipped: the upstream scan
    leaves cells empty where the iteration broke down or the rescaling is
    undefined, and there is nothing to draw for those.
    """
    needed = [spec.xcol, spec.ycol]
    if spec.where is not None:
        needed.append(spec.where[0])
    for col in needed:
        if col not in header:
            raise MissingColumnError(col, spec.path, header)
    cells = []
    for row in rows:
        if spec.where is not None and row[spec.where[0]] != spec.where[1]:
            continue
        x, y = row[spec.xcol], row[spec.ycol]
        if x == "" or y == "":
            continue
        cells.append((x, y))
    return cells


def _require_columns(path, header: Sequence[str], columns: Sequence[str]):
    for col in columns:
        if col not in header:
            raise MissingColumnError(col, path, header)


# ---------------------------------------------------------------------------
# spec builders for the two canned figure layouts

def fig1_spec(
    csv_paths: Sequence[str],
    out_path: str,
    xlabel: str = "n",
    ylabel: str = "rescaled alpha_n",
) -> FigureSpec:
    """Panels per Taylor-comparison table, asymptote overlay on the first.

    Files are told apart by their headers: a table with an
    ``alpha_est_rescaled`` column is the asymptote curve (at most one of
    those), anything else must carry the Taylor-comparison columns.
    """
    taylor: List[str] = []
    asymptote: List[str] = []
    for path in csv_paths:
        header, _ = read_table(path)
        if ASYMPTOTE_COLUMNS[1] in header:
            _require_columns(path, header, ASYMPTOTE_COLUMNS)
            asymptote.append(str(path))
        else:
            _require_columns(path, header, TAYLOR_COLUMNS)
            taylor.append(str(path))
    if not taylor:
        raise ValueError("fig1 needs at least one Taylor-comparison table")
    if len(asymptote) > 1:
        raise ValueError(
            f"fig1 takes at most one asymptote curve, got {len(asymptote)}"
        )
    panels = []
    for i, path in enumerate(taylor):
        stem = Path(path).stem
        series = [
            SeriesSpec(path, "n", "rescaled_iter",
                       label="iterated", style="points"),
            SeriesSpec(path, "n", "rescaled_taylor2", label="taylor order 2"),
            SeriesSpec(path, "n", "rescaled_taylor3", label="taylor order 3"),
        ]
        if i == 0 and asymptote:
            series.append(
                SeriesSpec(asymptote[0], "n", "alpha_est_rescaled",
                           label="asymptote")
            )
        panels.append(PanelSpec(stem, tuple(series)))
    return FigureSpec(
        mode="fig1",
        csv_paths=tuple(str(p) for p in csv_paths),
        panels=tuple(panels),
        xlabel=xlabel,
        ylabel=ylabel,
        out_path=str(out_path),
    )


def fig2_spec(
    csv_paths: Sequence[str],
    out_path: str,
    xlabel: str = "xjump",
    ylabel: str = "alpha_n / b",
) -> FigureSpec:
    """One panel per polynomial degree found across the scan tables.

    Panels are ordered by degree; within a panel there is one series per
    input file that contains that degree, labelled by the file stem.
    """
    per_degree: Dict[int, List[SeriesSpec]] = {}
    for path in csv_paths:
        header, rows = read_table(path)
        _require_columns(path, header, SCAN_COLUMNS)
        try:
            degrees = sorted({int(row["n"]) for row in rows})
        except ValueError:
            raise ValueError(f"non-integer degree cell in {path}")
        for deg in degrees:
            per_degree.setdefault(deg, []).append(
                SeriesSpec(str(path), "xjump", "alpha_rescaled",
                           label=Path(path).stem, where=("n", str(deg)))
            )
    panels = tuple(
        PanelSpec(f"n = {deg}", tuple(series))
        for deg, series in sorted(per_degree.items())
    )
    return FigureSpec(
        mode="fig2",
        csv_paths=tuple(str(p) for p in csv_paths),
        panels=panels,
        xlabel=xlabel,
        ylabel=ylabel,
        out_path=str(out_path),
    )
