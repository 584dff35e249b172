"""Deterministic rendering of sweep CSVs to SVG and PNG.

The output is a pure function of the CSV content: the SVG hash salt is
pinned, text stays text instead of being outlined to per-run glyph
paths, and the embedded creation date is suppressed, so repeat runs
produce byte-identical vector files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import SweepTable, read_sweep_csv
from .figures import PanelDef, PlotSpec

__all__ = ["render"]

_RC = {
    "svg.hashsalt": "sweep-plots",
    "svg.fonttype": "none",
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "font.size": 9.0,
    "legend.fontsize": 8.0,
}


def _draw_guides(ax, panel: PanelDef, tables: dict[str, SweepTable], slopes) -> None:
    """Reference power laws anchored below the first curve of the panel."""
    table = tables[panel.curves[0].csv_name]
    y = table.column(panel.curves[0].quantum)
    good = np.isfinite(y) & (y > 0)
    if not good.any():
        return
    x_a = float(table.theta0[good][0])
    y_a = 0.35 * float(y[good][0])
    x = np.array([x_a, 10.0 * x_a])
    for slope in slopes:
        ax.plot(
            x,
            y_a * (x / x_a) ** slope,
            color="0.45",
            linestyle=":",
            linewidth=0.9,
            zorder=1,
        )
        ax.text(
            x[1],
            y_a * 10.0**slope,
            f" slope {slope:g}",
            color="0.45",
            fontsize=7.5,
            va="center",
        )


def _draw_panel(ax, panel: PanelDef, tables: dict[str, SweepTable]) -> None:
    for curve in panel.curves:
        table = tables[curve.csv_name]
        ax.plot(
            table.theta0,
            table.column(curve.quantum),
            color=curve.color,
            linestyle="-",
            linewidth=1.3,
            label=curve.label,
        )
        ax.plot(
            table.theta0,
            table.column(curve.classical),
            color=curve.color,
            linestyle="--",
            linewidth=1.0,
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    if panel.title:
        ax.set_title(panel.title)


def render(spec: PlotSpec) -> list[Path]:
    """Draw the figure and write ``<out_base>.svg`` and ``<out_base>.png``.

    All CSVs are read and validated before any drawing starts, so a
    broken input never leaves a half-written image behind.
    """
    tables = {path.name: read_sweep_csv(path) for path in spec.csv_paths}
    spec.out_base.parent.mkdir(parents=True, exist_ok=True)
    nrows, ncols = spec.grid
    with matplotlib.rc_context(_RC):
        fig, axes = plt.subplots(
            nrows,
            ncols,
            figsize=(4.0 * ncols, 3.2 * nrows),
            squeeze=False,
            layout="constrained",
        )
        for ax, panel in zip(axes.flat, spec.panels):
            _draw_panel(ax, panel, tables)
            _draw_guides(ax, panel, tables, spec.guide_slopes)
            ax.legend(loc="upper left", frameon=False)
        for ax in axes[-1, :]:
            ax.set_xlabel(spec.xlabel)
        for ax in axes[:, 0]:
            ax.set_ylabel(spec.ylabel)
        out_svg = spec.out_base.with_suffix(".svg")
        out_png = spec.out_base.with_suffix(".png")
        try:
            fig.savefig(out_svg, metadata={"Date": None})
            fig.savefig(out_png)
        finally:
            plt.close(fig)
    return [out_svg, out_png]
