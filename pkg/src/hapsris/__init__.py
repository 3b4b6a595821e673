"""Simulator and optimizer for communication through a platform-mounted
amplifying reflective surface: per-user link budgets, sum-rate maximization
via a geometric-programming relaxation, and energy-efficiency accounting
across amplifier-sharing architectures."""

from .allocator import (
    Allocation,
    ConstraintReport,
    ProblemSpec,
    RelaxedSolution,
    build_gp,
    certify,
    gamma_min_from_rate,
    round_and_repair,
    solve_gp,
)
from .channel import ChannelParams, LinkBudget, element_channel_gains, fspl, los_probability, path_loss
from .energy import PowerModel, dbm_to_watts, energy_efficiency, total_power
from .geometry import GeometryConstants, Position, elevation_angle, slant_distance_3d
from .gp import GpProblem, InfeasibleProblem, Posynomial, SolverFailure
from .harness import CSV_COLUMNS, PointResult, SweepSpec, run_point, run_sweep
from .ris import RisConfig, UeLink, amplification_gain, quantize_phase, quantized_coherence_loss, rate, snr
from .scenario import ConfigError, Scenario, generate_scenario, load_config

__all__ = [
    "Allocation",
    "ChannelParams",
    "ConfigError",
    "ConstraintReport",
    "CSV_COLUMNS",
    "GeometryConstants",
    "GpProblem",
    "InfeasibleProblem",
    "LinkBudget",
    "PointResult",
    "Position",
    "PowerModel",
    "ProblemSpec",
    "RelaxedSolution",
    "RisConfig",
    "Scenario",
    "SolverFailure",
    "SweepSpec",
    "UeLink",
    "amplification_gain",
    "build_gp",
    "certify",
    "dbm_to_watts",
    "element_channel_gains",
    "elevation_angle",
    "energy_efficiency",
    "fspl",
    "gamma_min_from_rate",
    "generate_scenario",
    "load_config",
    "los_probability",
    "path_loss",
    "quantize_phase",
    "quantized_coherence_loss",
    "rate",
    "round_and_repair",
    "run_point",
    "run_sweep",
    "slant_distance_3d",
    "snr",
    "solve_gp",
    "total_power",
]

__version__ = "0.1.0"
