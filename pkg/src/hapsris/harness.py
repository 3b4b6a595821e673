"""End-to-end evaluation: channel -> surface -> allocator -> power, plus sweeps.

Every sweep point is a pure function of (scenario, scheme, swept value, seed),
so points can be evaluated in any order or concurrently; rows are always
emitted in deterministic (scheme, value, repetition) order and the CSV is
byte-stable for a fixed config and seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import allocator, channel, energy, geometry, ris
from .allocator import Allocation, ConstraintReport, ProblemSpec
from .gp import InfeasibleProblem, SolverFailure
from .scenario import GROUP_SIZES, SCHEMES, Scenario

CSV_COLUMNS = (
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
CSV_HEADER = ",".join(CSV_COLUMNS)


@dataclass
class PointResult:
    """One solved operating point, one CSV row."""

    scheme: str
    n_total: int
    group_size: int
    n_amplifiers: int
    pa_power_dbm: float
    sum_rate_bps: float
    total_power_w: float
    energy_eff_bpj: float
    min_ue_rate_bps: float
    feasible: bool
    kkt_residual: float
    seed: int
    allocation: Allocation
    report: ConstraintReport
    beta: np.ndarray
    problem: ProblemSpec

    def csv_row(self) -> str:
        fields = (
            self.scheme,
            str(self.n_total),
            str(self.group_size),
            str(self.n_amplifiers),
            repr(float(self.pa_power_dbm)),
            repr(float(self.sum_rate_bps)),
            repr(float(self.total_power_w)),
            repr(float(self.energy_eff_bpj)),
            repr(float(self.min_ue_rate_bps)),
            "true" if self.feasible else "false",
            repr(float(self.kkt_residual)),
            str(self.seed),
        )
        return ",".join(fields)


@dataclass(frozen=True)
class SweepSpec:
    """Grid of operating points: one swept variable across schemes."""

    variable: str  # "n_total" or "pa_power"
    values: tuple
    schemes: tuple
    repetitions: int = 1
    seed: int = 7

    def __post_init__(self) -> None:
        if self.variable not in ("n_total", "pa_power"):
            raise ValueError("sweep variable must be 'n_total' or 'pa_power'")
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ValueError(f"unknown schemes {bad}; valid: {SCHEMES}")


def link_budgets(sc: Scenario) -> tuple[channel.LinkBudget, list[channel.LinkBudget]]:
    """Per-hop budgets: control station -> platform, platform -> each UE."""
    lb_cs = channel.path_loss(
        geometry.elevation_angle(sc.cs, sc.haps),
        sc.channel,
        geometry.GeometryConstants(sc.earth_radius_m, sc.haps.z - sc.cs.z),
        gain_tx_db=sc.cs_gain_db,
        blend=sc.blend,
    )
    lb_ues = []
    for ue in sc.ue_positions:
        lb_ues.append(
            channel.path_loss(
                geometry.elevation_angle(ue, sc.haps),
                sc.channel,
                geometry.GeometryConstants(sc.earth_radius_m, sc.haps.z - ue.z),
                gain_rx_db=sc.ue_gain_db,
                blend=sc.blend,
            )
        )
    return lb_cs, lb_ues


def build_problem(sc: Scenario) -> tuple[ProblemSpec, ris.RisConfig, np.ndarray]:
    """Assemble the allocation problem for one scenario."""
    lb_cs, lb_ues = link_budgets(sc)
    gains = [channel.element_channel_gains(lb_cs, lb) for lb in lb_ues]
    h_sq = gains[0][0]
    g_sq = np.array([g for _, g in gains])

    mode = ris.PASSIVE if sc.scheme == "passive" else ris.ACTIVE
    cfg = ris.RisConfig(
        n_total=sc.n_total,
        group_size=GROUP_SIZES.get(sc.scheme, 1),
        pa_power_w=energy.dbm_to_watts(sc.pa_power_dbm),
        dynamic_noise_w=sc.dynamic_noise_w,
        mode=mode,
        phase_bits=sc.phase_bits,
    )
    if sc.beta_coupling == "budget" or mode == ris.PASSIVE:
        beta = np.full(sc.n_ues, ris.amplification_gain(cfg, sc.p_max_w, h_sq))
    else:
        beta = np.full(sc.n_ues, ris.amplification_gain(cfg, sc.p_ue_max_w, h_sq))

    cascade = h_sq * g_sq
    if sc.phase_bits is not None:
        # Quantized phases cost a deterministic coherence factor on the
        # aligned signal; the amplifier-noise path carries magnitudes only.
        cascade = cascade * ris.quantized_coherence_loss(
            sc.phase_bits, 1024, seed=sc.seed
        )
    noise_gain = g_sq * (0.0 if mode == ris.PASSIVE else sc.dynamic_noise_w)

    k = sc.n_ues
    spec = ProblemSpec(
        cascade_gain=cascade,
        noise_gain=noise_gain,
        noise_floor_w=sc.noise_floor_w,
        beta=beta,
        n_max=sc.n_total,
        p_max_w=sc.p_max_w,
        n_min_per_ue=np.full(k, float(sc.n_ue_min)),
        n_max_per_ue=np.full(k, float(sc.n_ue_max)),
        p_min_per_ue_w=np.full(k, sc.p_ue_min_w),
        p_max_per_ue_w=np.full(k, sc.p_ue_max_w),
        gamma_min=allocator.gamma_min_from_rate(sc.r_min_bps, sc.bandwidth_per_ue_hz),
        bandwidth_hz=sc.bandwidth_per_ue_hz,
    )
    return spec, cfg, beta


def run_point(sc: Scenario) -> PointResult:
    """Solve one operating point.

    An infeasible rate floor does not abort the row: the point is re-solved
    without the per-UE minimum rates (best effort) and emitted with
    feasible=false so sweeps show the feasibility boundary.
    """
    spec, cfg, beta = build_problem(sc)
    gp = allocator.build_gp(spec)
    try:
        relaxed = allocator.solve_gp(gp, tol=sc.solver_tol, max_iter=sc.solver_max_iter)
    except InfeasibleProblem:
        import dataclasses

        best_effort = dataclasses.replace(spec, gamma_min=1e-12)
        relaxed = allocator.solve_gp(
            allocator.build_gp(best_effort), tol=sc.solver_tol, max_iter=sc.solver_max_iter
        )
    alloc = allocator.round_and_repair(relaxed, spec)
    report = allocator.certify(alloc, spec)

    if sc.power_accounting == "installed":
        n_powered = sc.n_total
        q_powered = cfg.n_amplifiers
    else:
        n_powered = int(alloc.n_elements.sum())
        q_powered = 0 if cfg.mode == ris.PASSIVE else math.ceil(n_powered / cfg.group_size)
    total = energy.total_power(
        sc.power,
        float(alloc.tx_power_w.sum()),
        n_powered,
        q_powered,
        sc.n_ues if sc.include_ue_circuit else 0,
    )
    return PointResult(
        scheme=sc.scheme,
        n_total=sc.n_total,
        group_size=cfg.group_size,
        n_amplifiers=cfg.n_amplifiers,
        pa_power_dbm=sc.pa_power_dbm,
        sum_rate_bps=alloc.sum_rate_bps,
        total_power_w=total,
        energy_eff_bpj=energy.energy_efficiency(alloc.sum_rate_bps, total),
        min_ue_rate_bps=float(alloc.rate_bps.min()),
        feasible=alloc.feasible,
        kkt_residual=alloc.kkt_residual,
        seed=sc.seed,
        allocation=alloc,
        report=report,
        beta=beta,
        problem=spec,
    )


def sweep_points(sc: Scenario, sw: SweepSpec):
    """Scenario variants in deterministic (scheme, value, repetition) order."""
    for scheme in sw.schemes:
        for value in sw.values:
            for rep in range(sw.repetitions):
                seed = sw.seed + rep
                overrides = {"scheme": scheme, "seed": seed}
                if sw.variable == "n_total":
                    overrides["n_total"] = int(value)
                else:
                    overrides["pa_power_dbm"] = float(value)
                yield sc.with_overrides(**overrides)


def run_sweep(sc: Scenario, sw: SweepSpec) -> list[PointResult]:
    """Evaluate every sweep point; each point is independent of the others."""
    results = []
    for variant in sweep_points(sc, sw):
        if variant.seed != sc.seed:
            variant = _reseed_positions(variant)
        results.append(run_point(variant))
    return results


def _reseed_positions(sc: Scenario) -> Scenario:
    rng = np.random.default_rng(sc.seed)
    xs = rng.uniform(0.0, sc.area_m[0], sc.n_ues)
    ys = rng.uniform(0.0, sc.area_m[1], sc.n_ues)
    positions = tuple(geometry.Position(float(x), float(y), 0.0) for x, y in zip(xs, ys))
    return sc.with_overrides(ue_positions=positions)


def results_to_csv(results: list[PointResult]) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in results)
    return "\n".join(lines) + "\n"


def write_csv(results: list[PointResult], path: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(results_to_csv(results))
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
