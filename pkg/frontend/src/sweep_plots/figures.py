"""Figure layouts.

Each figure id maps to a panel arrangement and, per panel, the list of
curves to draw: which CSV file feeds it, which column is the quantum
bound (drawn solid) and which the heterodyne error (dashed), and the
colour shared by the pair.  The layouts mirror the benchmark sweeps the
sensing toolkit emits; nothing here recomputes physics.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

__all__ = ["CurveDef", "PanelDef", "PlotSpec", "figure_ids", "plot_spec"]


@dataclass(frozen=True)
class CurveDef:
    csv_name: str
    quantum: str
    classical: str
    color: str
    label: str


@dataclass(frozen=True)
class PanelDef:
    title: str
    curves: tuple[CurveDef, ...]


@dataclass(frozen=True)
class PlotSpec:
    """Everything ``render`` needs: inputs, layout, labels, output."""

    figure_id: str
    csv_paths: tuple[Path, ...]
    panels: tuple[PanelDef, ...]
    grid: tuple[int, int]
    xlabel: str
    ylabel: str
    guide_slopes: tuple[float, ...]
    out_base: Path


def _fig3_panels() -> tuple[PanelDef, ...]:
    return (
        PanelDef(
            title="",
            curves=(
                CurveDef(
                    "fig3_single.csv", "delta_q", "delta_c", "black", "single"
                ),
                CurveDef(
                    "fig3_nuisance_th1_000.csv",
                    "Delta_q",
                    "Delta_c",
                    "red",
                    "nuisance, theta1 = 0",
                ),
                CurveDef(
                    "fig3_nuisance_th1_025.csv",
                    "Delta_q",
                    "Delta_c",
                    "blue",
                    "nuisance, theta1 = 0.25",
                ),
            ),
        ),
    )


_FIG5_TITLES = (
    ("lt1a", "LT-1a"),
    ("lt2a", "LT-2a"),
    ("una", "UN-a"),
    ("lt1b", "LT-1b"),
    ("lt2b", "LT-2b"),
    ("unb", "UN-b"),
)


def _fig5_panels() -> tuple[PanelDef, ...]:
    panels = []
    for panel_id, title in _FIG5_TITLES:
        panels.append(
            PanelDef(
                title=title,
                curves=(
                    CurveDef(
                        f"fig5_{panel_id}_two_mode.csv",
                        "delta_q",
                        "delta_c",
                        "black",
                        "two-mode",
                    ),
                    CurveDef(
                        f"fig5_{panel_id}_one_mode.csv",
                        "delta_q",
                        "delta_c",
                        "red",
                        "one-mode",
                    ),
                ),
            )
        )
    return tuple(panels)


def _fig6_panels() -> tuple[PanelDef, ...]:
    return (
        PanelDef(
            title="",
            curves=(
                CurveDef(
                    "fig6_plus.csv", "delta_q", "delta_c", "black", "theta0 > 0"
                ),
                CurveDef(
                    "fig6_minus.csv", "delta_q", "delta_c", "red", "theta0 < 0"
                ),
            ),
        ),
    )


_LAYOUTS: dict[str, tuple[tuple[PanelDef, ...], tuple[int, int], str]] = {
    "fig3": (_fig3_panels(), (1, 1), "theta0"),
    "fig5": (_fig5_panels(), (2, 3), "theta0"),
    "fig6": (_fig6_panels(), (1, 1), "|theta0|"),
}


def figure_ids() -> list[str]:
    return sorted(_LAYOUTS)


def plot_spec(figure_id: str, in_dir: Path | str, out_dir: Path | str) -> PlotSpec:
    try:
        panels, grid, xlabel = _LAYOUTS[figure_id]
    except KeyError:
        raise ValueError(
            f"unknown figure id {figure_id!r}; choose from {', '.join(figure_ids())}"
        ) from None
    in_dir = Path(in_dir)
    csv_paths = tuple(
        in_dir / curve.csv_name for panel in panels for curve in panel.curves
    )
    return PlotSpec(
        figure_id=figure_id,
        csv_paths=csv_paths,
        panels=panels,
        grid=grid,
        xlabel=xlabel,
        ylabel="error per shot",
        guide_slopes=(1.0, 2.0),
        out_base=Path(out_dir) / figure_id,
    )
