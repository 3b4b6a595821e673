"""Line plots over sweep CSVs, one series per scheme.

The CSV schema is the whole contract with the simulator: columns are read by
name from the header, nothing is recomputed here, and a missing column fails
loudly before any file is written.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# Header written by the simulator's sweep command; checked, never assumed.
SWEEP_COLUMNS = (
    "scheme",
    "N",
    "T",
    "Q",
    "pa_power_dbm",
    "sum_rate_bps",
    "total_power_w",
    "energy_eff_bpj",
    "min_ue_rate_bps",
    "feasible",
    "kkt_residual",
    "seed",
)

SCHEME_ORDER = ("I", "II", "III", "IV", "passive")


class SchemaError(ValueError):
    """The CSV does not carry a required column."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    x_column: str
    y_column: str
    group_column: str
    out_path: str
    x_label: str
    y_label: str


FIGURE_PRESETS: dict[int, dict] = {
    2: {
        "x_column": "N",
        "y_column": "sum_rate_bps",
        "x_label": "total reflecting elements N",
        "y_label": "sum rate (bit/s)",
    },
    3: {
        "x_column": "N",
        "y_column": "energy_eff_bpj",
        "x_label": "total reflecting elements N",
        "y_label": "energy efficiency (bit/J)",
    },
    4: {
        "x_column": "pa_power_dbm",
        "y_column": "sum_rate_bps",
        "x_label": "amplifier output power (dBm)",
        "y_label": "sum rate (bit/s)",
    },
    5: {
        "x_column": "pa_power_dbm",
        "y_column": "energy_eff_bpj",
        "x_label": "amplifier output power (dBm)",
        "y_label": "energy efficiency (bit/J)",
    },
}


def figure_spec(number: int, csv_path: str, out_path: str) -> FigureSpec:
    try:
        preset = FIGURE_PRESETS[number]
    except KeyError:
        raise ValueError(f"figure must be one of {sorted(FIGURE_PRESETS)}, got {number}") from None
    return FigureSpec(
        csv_path=csv_path,
        group_column="scheme",
        out_path=out_path,
        **preset,
    )


def read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{csv_path}: empty file, no header")
        return list(reader)


def series_by_group(rows: list[dict], spec: FigureSpec) -> dict[str, list[tuple[float, float]]]:
    """Column-checked (x, y) points per scheme, sorted by x."""
    if not rows:
        raise SchemaError(f"{spec.csv_path}: no data rows")
    for column in (spec.x_column, spec.y_column, spec.group_column):
        if column not in rows[0]:
            raise SchemaError(
                f"{spec.csv_path}: missing column {column!r}; "
                f"found {sorted(rows[0])}"
            )
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        point = (float(row[spec.x_column]), float(row[spec.y_column]))
        series.setdefault(row[spec.group_column], []).append(point)
    for points in series.values():
        points.sort()
    return series


def _ordered_groups(series: dict) -> list[str]:
    known = [s for s in SCHEME_ORDER if s in series]
    extra = sorted(s for s in series if s not in SCHEME_ORDER)
    return known + extra


def plot_figure(spec: FigureSpec) -> list[str]:
    """Render one figure; returns the scheme names plotted, in legend order.

    Validation happens before the output file is touched, and the output is
    deterministic for identical input.
    """
    rows = read_rows(spec.csv_path)
    series = series_by_group(rows, spec)
    groups = _ordered_groups(series)

    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=130)
    markers = ["o", "s", "^", "v", "d", "x", "*"]
    for i, group in enumerate(groups):
        xs, ys = zip(*series[group])
        ax.plot(xs, ys, marker=markers[i % len(markers)], label=str(group))
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    ax.grid(True, alpha=0.4)
    ax.legend(title="scheme")
    fig.tight_layout()
    fig.savefig(spec.out_path, format="png")
    plt.close(fig)
    return groups
