#!/usr/bin/env python3
"""Run both baseline experiments and write their CSVs.

Produces results/elements_sweep.csv (sum rate and energy efficiency against
the installed element count, all five schemes) and results/pa_power_sweep.csv
(against per-amplifier power at the baseline element count, active schemes).
These two files feed the four standard figures.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from hapsris.harness import SweepSpec, run_sweep, write_csv
from hapsris.scenario import generate_scenario

ELEMENT_VALUES = (389120, 454656, 520192, 585728, 651264, 716800)
PA_VALUES = (25.0, 28.0, 31.0, 34.0, 37.0, 40.0, 43.0)


def main() -> int:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "results"
    out_dir.mkdir(exist_ok=True)
    sc = generate_scenario()

    elements = SweepSpec(
        variable="n_total",
        values=ELEMENT_VALUES,
        schemes=("I", "II", "III", "IV", "passive"),
        seed=sc.seed,
    )
    results = run_sweep(sc, elements)
    write_csv(results, str(out_dir / "elements_sweep.csv"))
    print(f"elements sweep: {len(results)} rows -> {out_dir / 'elements_sweep.csv'}")

    pa = SweepSpec(
        variable="pa_power",
        values=PA_VALUES,
        schemes=("I", "II", "III", "IV"),
        seed=sc.seed,
    )
    results = run_sweep(sc, pa)
    write_csv(results, str(out_dir / "pa_power_sweep.csv"))
    print(f"pa-power sweep: {len(results)} rows -> {out_dir / 'pa_power_sweep.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
