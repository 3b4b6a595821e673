"""Figure rendering for sweep CSVs produced by the hapsris simulator."""

from .plots import FIGURE_PRESETS, FigureSpec, SchemaError, figure_spec, plot_figure, series_by_group

__all__ = [
    "FIGURE_PRESETS",
    "FigureSpec",
    "SchemaError",
    "figure_spec",
    "plot_figure",
    "series_by_group",
]
