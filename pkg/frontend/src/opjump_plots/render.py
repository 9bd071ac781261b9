"""Multi-panel SVG rendering of the upstream CSV tables.

The renderer is deliberately dumb: cells are parsed with float() and handed
to matplotlib untouched, so every plotted point is bit-identical to a cell
pair in some CSV row.  RenderResult exposes the data arrays taken back off
the drawn artists, which is what the tests compare against the files.

Output is deterministic for fixed inputs: the SVG id hash salt is pinned
and the date stamp suppressed, so re-rendering the same spec from the same
bytes writes the same image.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .figspec import FigureSpec, read_table, series_cells

_STYLE_KW = {
    "points": {"linestyle": "", "marker": ".", "markersize": 4},
    "line": {"linestyle": "-", "marker": ""},
}


@dataclass(frozen=True, eq=False)
class SeriesData:
    """One plotted series as the artist holds it."""

    panel: str
    label: str
    style: str
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True, eq=False)
class RenderResult:
    out_path: str
    series: Tuple[SeriesData, ...]


def render(figspec: FigureSpec, subsample: int = 1) -> RenderResult:
    """Draw the figure described by `figspec` and write it to disk.

    `subsample` keeps every k-th row of each series (after blank rows are
    dropped), starting with the first.  The default of 1 plots everything;
    thinning is a readability convenience only and is not faithful to any
    particular published pruning of this data.
    """
    if subsample < 1:
        raise ValueError(f"subsample must be >= 1, got {subsample}")

    tables: Dict[str, tuple] = {}
    for panel in figspec.panels:
        for spec in panel.series:
            if spec.path not in tables:
                tables[spec.path] = read_table(spec.path)

    # extract and validate everything before any drawing happens, so a bad
    # column in the last panel cannot leave a half-written image behind
    extracted = []
    for panel in figspec.panels:
        for spec in panel.series:
            header, rows = tables[spec.path]
            cells = series_cells(spec, header, rows)[::subsample]
            if not cells:
                raise ValueError(
                    f"series {spec.label!r}: no plottable rows in {spec.path}"
                )
            xs = np.array([float(x) for x, _ in cells])
            ys = np.array([float(y) for _, y in cells])
            extracted.append((panel.title, spec, xs, ys))

    npanels = len(figspec.panels)
    # pinned hash salt -> stable element ids; fonttype none keeps labels as
    # real text elements, so the files stay small and diff well
    rc = {"svg.hashsalt": "opjump-plots", "svg.fonttype": "none"}
    with matplotlib.rc_context(rc):
        fig, axes = plt.subplots(
            npanels, 1, figsize=(6.4, 2.8 * npanels), sharex=True,
            squeeze=False,
        )
        ax_of = {p.title: axes[i][0] for i, p in enumerate(figspec.panels)}
        collected = []
        for title, spec, xs, ys in extracted:
            ax = ax_of[title]
            (line,) = ax.plot(xs, ys, label=spec.label, **_STYLE_KW[spec.style])
            collected.append(
                SeriesData(
                    panel=title,
                    label=spec.label,
                    style=spec.style,
                    x=np.asarray(line.get_xdata(orig=True)),
                    y=np.asarray(line.get_ydata(orig=True)),
                )
            )
        for panel in figspec.panels:
            ax = ax_of[panel.title]
            ax.set_title(panel.title, fontsize="medium")
            ax.set_ylabel(figspec.ylabel)
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize="small")
        axes[-1][0].set_xlabel(figspec.xlabel)
        fig.tight_layout()
        fmt = Path(figspec.out_path).suffix.lstrip(".") or "svg"
        save_kw = {"metadata": {"Date": None}} if fmt == "svg" else {}
        try:
            fig.savefig(figspec.out_path, format=fmt, **save_kw)
        finally:
            plt.close(fig)
    return RenderResult(out_path=figspec.out_path, series=tuple(collected))
