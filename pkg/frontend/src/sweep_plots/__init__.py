"""Log-log figure rendering for singular-sense sweep CSVs.

The plotter consumes only the files the sensing toolkit emits (the
canonical sweep CSVs); it never recomputes physics.  ``plot_spec``
resolves a figure id to input files and a layout, ``render`` draws it
deterministically to SVG and PNG.
"""

from __future__ import annotations

from .csvio import CANONICAL_HEADER, CsvFormatError, SweepTable, read_sweep_csv
from .figures import CurveDef, PanelDef, PlotSpec, figure_ids, plot_spec
from .render import render

__all__ = [
    "CANONICAL_HEADER",
    "CsvFormatError",
    "CurveDef",
    "PanelDef",
    "PlotSpec",
    "SweepTable",
    "figure_ids",
    "plot_spec",
    "read_sweep_csv",
    "render",
]

__version__ = "0.1.0"
