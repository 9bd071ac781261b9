"""Render the numerics CLI's CSV tables as multi-panel SVG figures.

This package never computes anything: it reads delimited files written by
the `opjump` command line tool and draws them.  Whatever numbers are in the
file are the numbers in the plot.
"""

from .figspec import (
    FigureSpec,
    MissingColumnError,
    PanelSpec,
    SeriesSpec,
    fig1_spec,
    fig2_spec,
)
from .render import RenderResult, SeriesData, render

__all__ = [
    "FigureSpec",
    "MissingColumnError",
    "PanelSpec",
    "RenderResult",
    "SeriesData",
    "SeriesSpec",
    "fig1_spec",
    "fig2_spec",
    "render",
]
