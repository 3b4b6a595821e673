"""Command-line interface.

Exit codes: 0 ok, 1 config error, 2 infeasible single-point solve,
3 internal solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .gp import SolverFailure
from .scenario import (
    DEFAULT_CONFIG,
    SCHEMES,
    ConfigError,
    generate_scenario,
    load_config,
    scenario_to_config,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_SOLVER = 3


def _parse_values(text: str, as_int: bool) -> tuple:
    cast = int if as_int else float
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"--values must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError("--values step must be positive")
        values, v = [], start
        while v <= stop + 1e-9 * max(1.0, abs(stop)):
            values.append(cast(round(v, 12)))
            v += step
    else:
        values = [cast(float(p)) for p in text.split(",") if p]
    if not values:
        raise ConfigError(f"--values produced no points: {text!r}")
    return tuple(values)


def _default_values(config: dict, variable: str) -> tuple:
    sweep_cfg = config["sweep"]
    if variable == "n_total":
        spec = sweep_cfg["elements"]
        count = int(spec["count"])
        start, stop = float(spec["start"]), float(spec["stop"])
        if count == 1:
            return (int(start),)
        step = (stop - start) / (count - 1)
        return tuple(int(round(start + i * step)) for i in range(count))
    spec = sweep_cfg["pa_power_dbm"]
    return _parse_values(f"{spec['start']}:{spec['stop']}:{spec['step']}", as_int=False)


def _load(path: str | None) -> dict:
    if path is None:
        return json.loads(json.dumps(DEFAULT_CONFIG))
    return load_config(path)


def _cmd_solve(args) -> int:
    config = _load(args.config)
    sc = generate_scenario(config, seed=args.seed)
    if args.scheme is not None:
        sc = sc.with_overrides(scheme=args.scheme)
    result = harness.run_point(sc)
    print(f"scheme          {result.scheme}")
    print(f"elements        {result.n_total} (group size {result.group_size}, {result.n_amplifiers} amplifiers)")
    print(f"pa power        {result.pa_power_dbm} dBm")
    print(f"sum rate        {result.sum_rate_bps:.6g} bit/s")
    print(f"total power     {result.total_power_w:.6g} W")
    print(f"energy eff      {result.energy_eff_bpj:.6g} bit/J")
    print(f"min UE rate     {result.min_ue_rate_bps:.6g} bit/s")
    print(f"kkt residual    {result.kkt_residual:.3e}")
    print(f"feasible        {'true' if result.feasible else 'false'}")
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def _cmd_sweep(args) -> int:
    config = _load(args.config)
    seed = args.seed if args.seed is not None else int(config["ues"]["seed"])
    sc = generate_scenario(config, seed=seed)
    variable = {"elements": "n_total", "pa-power": "pa_power"}[args.var]
    if args.values:
        values = _parse_values(args.values, as_int=(variable == "n_total"))
    else:
        values = _default_values(config, variable)
    if args.schemes:
        schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    elif variable == "pa_power":
        schemes = tuple(s for s in config["sweep"]["schemes"] if s != "passive")
    else:
        schemes = tuple(config["sweep"]["schemes"])
    sw = harness.SweepSpec(
        variable=variable,
        values=values,
        schemes=schemes,
        repetitions=args.repetitions,
        seed=seed,
    )
    results = harness.run_sweep(sc, sw)
    harness.write_csv(results, args.out)
    infeasible = sum(1 for r in results if not r.feasible)
    print(f"wrote {len(results)} rows to {args.out} ({infeasible} infeasible)")
    return EXIT_OK


def _cmd_gen_scenario(args) -> int:
    config = _load(args.config)
    sc = generate_scenario(config, seed=args.seed)
    with open(args.out, "w") as fh:
        json.dump(scenario_to_config(sc), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote scenario with {sc.n_ues} UEs to {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = load_config(args.config)
    generate_scenario(config)
    print(f"{args.config}: ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hapsris",
        description="Link-budget simulation and sum-rate optimization for a "
        "platform-mounted amplifying reflective surface",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a single operating point")
    p_solve.add_argument("config", nargs="?", default=None, help="scenario JSON (defaults built in)")
    p_solve.add_argument("--scheme", choices=SCHEMES, default=None)
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    p_sweep.add_argument("config", nargs="?", default=None)
    p_sweep.add_argument("--var", choices=("elements", "pa-power"), default="elements")
    p_sweep.add_argument("--values", default=None, help="start:stop:step or comma list")
    p_sweep.add_argument("--schemes", default=None, help="comma list, e.g. I,II,passive")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--repetitions", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_gen = sub.add_parser("gen-scenario", help="resolve a config into an explicit scenario file")
    p_gen.add_argument("config", nargs="?", default=None)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.set_defaults(func=_cmd_gen_scenario)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("config")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
