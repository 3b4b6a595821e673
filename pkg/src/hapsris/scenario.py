"""Scenario configuration: defaults, file loading, validation, UE placement.

A scenario file is a single JSON document with sections mirroring the
Scenario fields. Every field has a default taken from the reference
deployment (a 15 km x 15 km urban area served by one control station through
a platform-mounted surface at 20 km), so an empty config reproduces the
baseline experiment.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelParams, ELEVATION_BUCKETS
from .energy import PowerModel, dbm_to_watts
from .geometry import Position

SPEED_OF_LIGHT = 299792458.0

SCHEMES = ("I", "II", "III", "IV", "passive")
GROUP_SIZES = {"I": 1, "II": 512, "III": 1024, "IV": 2048}

# Urban S-band clutter loss (dB) against elevation bucket, transcribed from
# 3GPP TR 38.811 Table 6.6.2-2.
URBAN_SBAND_CLUTTER_NLOS = {
    10: 34.3, 20: 30.9, 30: 29.0, 40: 27.7, 50: 26.8,
    60: 26.2, 70: 25.8, 80: 25.5, 90: 25.5,
}


class ConfigError(ValueError):
    """A scenario file failed to parse or validate."""


def _zero_table() -> dict[int, float]:
    return {b: 0.0 for b in ELEVATION_BUCKETS}


DEFAULT_CONFIG: dict = {
    "area": {"width_m": 15000.0, "height_m": 15000.0},
    "nodes": {
        "haps": [7500.0, 7500.0, 20000.0],
        "cs": [6000.0, 6000.0, 0.0],
    },
    "ues": {"count": 30, "seed": 7, "positions": None},
    "spectrum": {
        "carrier_ghz": 2.0,
        "bandwidth_per_ue_hz": 2.0e6,
        "noise_density_dbm_hz": -174.0,
    },
    "antennas": {"cs_gain_db": 43.2, "ue_gain_db": 0.0},
    "geometry": {"earth_radius_m": 6378.0e3},
    # Clear-sky defaults: zero gas/entry/shadow margins keep the passive
    # baseline exactly at its published feasibility boundary (N = 389,120
    # elements for 30 users); see configs/full_3gpp_losses.json for the
    # conservative urban margins.
    "channel": {
        "c1": 9.668,
        "c2": 0.547,
        "c3": -10.58,
        "l_gas_db": 0.0,
        "l_entry_db": 0.0,
        "scint_coeff": 14.7,
        "scint_exp": -1.136,
        "clutter_loss_los_db": 0.0,
        "clutter_loss_nlos_db": dict(URBAN_SBAND_CLUTTER_NLOS),
        "shadow_los_db": _zero_table(),
        "shadow_nlos_db": _zero_table(),
        "blend": "db",
    },
    "ris": {
        "n_total": 389120,
        "scheme": "I",
        "pa_power_dbm": 33.0,
        "dynamic_noise_dbm": -80.0,
        "phase_bits": None,
        "surface_area_m2": 650.0,
        "beta_coupling": "budget",
    },
    "power": {
        "static_dbm": 10.0,
        "switch_w": 7.8e-3,
        "bias_dbm": 10.0,
        "ue_circuit_dbm": 10.0,
        "accounting": "installed",
        "include_ue_circuit": True,
    },
    "budgets": {
        "r_min_bps": 2.0e6,
        "p_max_dbm": 33.0,
        "p_ue_min_dbm": 5.0,
        "p_ue_max_dbm": 30.0,
        "n_ue_min": 1000,
        "n_ue_max": 50000,
    },
    "solver": {"tol": 1.0e-6, "max_iter": 500},
    "sweep": {
        "elements": {"start": 389120, "stop": 716800, "count": 6},
        "pa_power_dbm": {"start": 25.0, "stop": 43.0, "step": 3.0},
        "schemes": list(SCHEMES),
        "repetitions": 1,
    },
}


@dataclass(frozen=True)
class Scenario:
    """Fully resolved inputs for one solver run."""

    area_m: tuple[float, float]
    haps: Position
    cs: Position
    ue_positions: tuple[Position, ...]
    carrier_ghz: float
    bandwidth_per_ue_hz: float
    noise_density_dbm_hz: float
    cs_gain_db: float
    ue_gain_db: float
    earth_radius_m: float
    channel: ChannelParams
    blend: str
    scheme: str
    n_total: int
    pa_power_dbm: float
    dynamic_noise_w: float
    phase_bits: int | None
    surface_area_m2: float | None
    beta_coupling: str
    power: PowerModel
    power_accounting: str
    include_ue_circuit: bool
    r_min_bps: float
    p_max_w: float
    p_ue_min_w: float
    p_ue_max_w: float
    n_ue_min: int
    n_ue_max: int
    solver_tol: float
    solver_max_iter: int
    seed: int

    @property
    def n_ues(self) -> int:
        return len(self.ue_positions)

    @property
    def noise_floor_w(self) -> float:
        return dbm_to_watts(
            self.noise_density_dbm_hz + 10.0 * math.log10(self.bandwidth_per_ue_hz)
        )

    def with_overrides(self, **kwargs) -> "Scenario":
        return replace(self, **kwargs)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config field: {here}")
        if isinstance(base[key], dict) and not _is_bucket_table(key):
            if not isinstance(value, dict):
                raise ConfigError(f"field {here} must be an object")
            out[key] = _merge(base[key], value, here)
        else:
            out[key] = value
    return out


def _is_bucket_table(key: str) -> bool:
    return key in ("clutter_loss_nlos_db", "shadow_los_db", "shadow_nlos_db")


def _bucket_table(raw: dict, name: str) -> dict[int, float]:
    try:
        table = {int(k): float(v) for k, v in raw.items()}
    except (TypeError, ValueError):
        raise ConfigError(f"field channel.{name} must map elevation buckets to dB") from None
    missing = [b for b in ELEVATION_BUCKETS if b not in table]
    if missing:
        raise ConfigError(f"field channel.{name} missing elevation buckets {missing}")
    return table


def load_config(path: str) -> dict:
    """Read and merge a JSON config file over the defaults."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be an object: {path}")
    return _merge(DEFAULT_CONFIG, raw)


def _position(raw, name: str) -> Position:
    if not (isinstance(raw, (list, tuple)) and len(raw) == 3):
        raise ConfigError(f"field {name} must be [x, y, z] in meters")
    try:
        return Position(float(raw[0]), float(raw[1]), float(raw[2]))
    except ValueError as exc:
        raise ConfigError(f"field {name}: {exc}") from None


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def generate_scenario(config: dict | None = None, seed: int | None = None) -> Scenario:
    """Resolve a merged config dict into a Scenario.

    UE positions come either verbatim from the config or from a uniform draw
    over the area, deterministic in the seed. `seed` overrides the config's.
    """
    cfg = _merge(DEFAULT_CONFIG, config or {})

    area = (float(cfg["area"]["width_m"]), float(cfg["area"]["height_m"]))
    _require(area[0] > 0 and area[1] > 0, "field area: dimensions must be positive")
    haps = _position(cfg["nodes"]["haps"], "nodes.haps")
    cs = _position(cfg["nodes"]["cs"], "nodes.cs")
    for name, node in (("nodes.haps", haps), ("nodes.cs", cs)):
        _require(
            0 <= node.x <= area[0] and 0 <= node.y <= area[1],
            f"field {name}: position outside area",
        )
    _require(haps.z > cs.z, "field nodes.haps: platform must be above the control station")

    ue_seed = int(cfg["ues"]["seed"] if seed is None else seed)
    raw_positions = cfg["ues"]["positions"]
    if raw_positions is not None:
        positions = tuple(
            _position(p, f"ues.positions[{i}]") for i, p in enumerate(raw_positions)
        )
        for i, p in enumerate(positions):
            _require(
                0 <= p.x <= area[0] and 0 <= p.y <= area[1] and p.z < haps.z,
                f"field ues.positions[{i}]: position outside area",
            )
        count = int(cfg["ues"]["count"])
        _require(
            count == len(positions),
            f"field ues.count: {count} does not match {len(positions)} explicit positions",
        )
    else:
        count = int(cfg["ues"]["count"])
        _require(count >= 1, "field ues.count: must be >= 1")
        rng = np.random.default_rng(ue_seed)
        xs = rng.uniform(0.0, area[0], count)
        ys = rng.uniform(0.0, area[1], count)
        positions = tuple(Position(float(x), float(y), 0.0) for x, y in zip(xs, ys))

    chan_cfg = cfg["channel"]
    _require(chan_cfg["blend"] in ("db", "linear"), "field channel.blend: must be 'db' or 'linear'")
    try:
        channel = ChannelParams(
            c1=float(chan_cfg["c1"]),
            c2=float(chan_cfg["c2"]),
            c3=float(chan_cfg["c3"]),
            l_gas_db=float(chan_cfg["l_gas_db"]),
            l_entry_db=float(chan_cfg["l_entry_db"]),
            scint_coeff=float(chan_cfg["scint_coeff"]),
            scint_exp=float(chan_cfg["scint_exp"]),
            clutter_loss_los_db=float(chan_cfg["clutter_loss_los_db"]),
            clutter_loss_nlos_db=_bucket_table(
                chan_cfg["clutter_loss_nlos_db"], "clutter_loss_nlos_db"
            ),
            shadow_los_db=_bucket_table(chan_cfg["shadow_los_db"], "shadow_los_db"),
            shadow_nlos_db=_bucket_table(chan_cfg["shadow_nlos_db"], "shadow_nlos_db"),
            carrier_ghz=float(cfg["spectrum"]["carrier_ghz"]),
        )
    except ValueError as exc:
        raise ConfigError(f"field channel: {exc}") from None

    ris_cfg = cfg["ris"]
    scheme = str(ris_cfg["scheme"])
    _require(scheme in SCHEMES, f"field ris.scheme: must be one of {SCHEMES}")
    n_total = int(ris_cfg["n_total"])
    _require(n_total >= 1, "field ris.n_total: must be >= 1")
    _require(
        ris_cfg["beta_coupling"] in ("budget", "per_ue"),
        "field ris.beta_coupling: must be 'budget' or 'per_ue'",
    )
    phase_bits = ris_cfg["phase_bits"]
    if phase_bits is not None:
        phase_bits = int(phase_bits)
        _require(phase_bits >= 1, "field ris.phase_bits: must be >= 1 or null")

    power_cfg = cfg["power"]
    _require(
        power_cfg["accounting"] in ("installed", "allocated"),
        "field power.accounting: must be 'installed' or 'allocated'",
    )
    power = PowerModel(
        p_static_w=dbm_to_watts(float(power_cfg["static_dbm"])),
        p_switch_w=float(power_cfg["switch_w"]),
        p_bias_w=dbm_to_watts(float(power_cfg["bias_dbm"])),
        p_amplifier_w=dbm_to_watts(float(ris_cfg["pa_power_dbm"])),
        p_ue_circuit_w=dbm_to_watts(float(power_cfg["ue_circuit_dbm"])),
        mode="passive" if scheme == "passive" else "active",
    )

    budget_cfg = cfg["budgets"]
    _require(budget_cfg["r_min_bps"] > 0, "field budgets.r_min_bps: must be positive")
    _require(
        budget_cfg["p_ue_min_dbm"] <= budget_cfg["p_ue_max_dbm"],
        "field budgets: p_ue_min_dbm above p_ue_max_dbm",
    )
    _require(
        int(budget_cfg["n_ue_min"]) >= 1
        and int(budget_cfg["n_ue_min"]) <= int(budget_cfg["n_ue_max"]),
        "field budgets: element box must satisfy 1 <= n_ue_min <= n_ue_max",
    )

    scenario = Scenario(
        area_m=area,
        haps=haps,
        cs=cs,
        ue_positions=positions,
        carrier_ghz=float(cfg["spectrum"]["carrier_ghz"]),
        bandwidth_per_ue_hz=float(cfg["spectrum"]["bandwidth_per_ue_hz"]),
        noise_density_dbm_hz=float(cfg["spectrum"]["noise_density_dbm_hz"]),
        cs_gain_db=float(cfg["antennas"]["cs_gain_db"]),
        ue_gain_db=float(cfg["antennas"]["ue_gain_db"]),
        earth_radius_m=float(cfg["geometry"]["earth_radius_m"]),
        channel=channel,
        blend=str(chan_cfg["blend"]),
        scheme=scheme,
        n_total=n_total,
        pa_power_dbm=float(ris_cfg["pa_power_dbm"]),
        dynamic_noise_w=dbm_to_watts(float(ris_cfg["dynamic_noise_dbm"])),
        phase_bits=phase_bits,
        surface_area_m2=(
            None if ris_cfg["surface_area_m2"] is None else float(ris_cfg["surface_area_m2"])
        ),
        beta_coupling=str(ris_cfg["beta_coupling"]),
        power=power,
        power_accounting=str(power_cfg["accounting"]),
        include_ue_circuit=bool(power_cfg["include_ue_circuit"]),
        r_min_bps=float(budget_cfg["r_min_bps"]),
        p_max_w=dbm_to_watts(float(budget_cfg["p_max_dbm"])),
        p_ue_min_w=dbm_to_watts(float(budget_cfg["p_ue_min_dbm"])),
        p_ue_max_w=dbm_to_watts(float(budget_cfg["p_ue_max_dbm"])),
        n_ue_min=int(budget_cfg["n_ue_min"]),
        n_ue_max=int(budget_cfg["n_ue_max"]),
        solver_tol=float(cfg["solver"]["tol"]),
        solver_max_iter=int(cfg["solver"]["max_iter"]),
        seed=ue_seed,
    )
    _check_surface_density(scenario)
    return scenario


def _check_surface_density(sc: Scenario) -> None:
    """Warn when the element count outgrows the configured aperture.

    Each reflector unit occupies (0.2 * wavelength)^2 of surface.
    """
    if sc.surface_area_m2 is None:
        return
    wavelength = SPEED_OF_LIGHT / (sc.carrier_ghz * 1e9)
    unit_area = (0.2 * wavelength) ** 2
    max_elements = sc.surface_area_m2 / unit_area
    if sc.n_total > max_elements:
        warnings.warn(
            f"{sc.n_total} elements exceed the {max_elements:.0f} that fit on "
            f"{sc.surface_area_m2} m^2 at (0.2 wavelength)^2 per unit",
            stacklevel=2,
        )


def scenario_to_config(sc: Scenario) -> dict:
    """Resolved config dict (explicit UE positions) that reloads identically."""
    return {
        "area": {"width_m": sc.area_m[0], "height_m": sc.area_m[1]},
        "nodes": {
            "haps": [sc.haps.x, sc.haps.y, sc.haps.z],
            "cs": [sc.cs.x, sc.cs.y, sc.cs.z],
        },
        "ues": {
            "count": sc.n_ues,
            "seed": sc.seed,
            "positions": [[p.x, p.y, p.z] for p in sc.ue_positions],
        },
        "spectrum": {
            "carrier_ghz": sc.carrier_ghz,
            "bandwidth_per_ue_hz": sc.bandwidth_per_ue_hz,
            "noise_density_dbm_hz": sc.noise_density_dbm_hz,
        },
        "antennas": {"cs_gain_db": sc.cs_gain_db, "ue_gain_db": sc.ue_gain_db},
        "geometry": {"earth_radius_m": sc.earth_radius_m},
        "channel": {
            "c1": sc.channel.c1,
            "c2": sc.channel.c2,
            "c3": sc.channel.c3,
            "l_gas_db": sc.channel.l_gas_db,
            "l_entry_db": sc.channel.l_entry_db,
            "scint_coeff": sc.channel.scint_coeff,
            "scint_exp": sc.channel.scint_exp,
            "clutter_loss_los_db": sc.channel.clutter_loss_los_db,
            "clutter_loss_nlos_db": {str(k): v for k, v in sc.channel.clutter_loss_nlos_db.items()},
            "shadow_los_db": {str(k): v for k, v in sc.channel.shadow_los_db.items()},
            "shadow_nlos_db": {str(k): v for k, v in sc.channel.shadow_nlos_db.items()},
            "blend": sc.blend,
        },
        "ris": {
            "n_total": sc.n_total,
            "scheme": sc.scheme,
            "pa_power_dbm": sc.pa_power_dbm,
            "dynamic_noise_dbm": 10.0 * math.log10(sc.dynamic_noise_w) + 30.0,
            "phase_bits": sc.phase_bits,
            "surface_area_m2": sc.surface_area_m2,
            "beta_coupling": sc.beta_coupling,
        },
        "power": {
            "static_dbm": 10.0 * math.log10(sc.power.p_static_w) + 30.0,
            "switch_w": sc.power.p_switch_w,
            "bias_dbm": 10.0 * math.log10(sc.power.p_bias_w) + 30.0,
            "ue_circuit_dbm": 10.0 * math.log10(sc.power.p_ue_circuit_w) + 30.0,
            "accounting": sc.power_accounting,
            "include_ue_circuit": sc.include_ue_circuit,
        },
        "budgets": {
            "r_min_bps": sc.r_min_bps,
            "p_max_dbm": 10.0 * math.log10(sc.p_max_w) + 30.0,
            "p_ue_min_dbm": 10.0 * math.log10(sc.p_ue_min_w) + 30.0,
            "p_ue_max_dbm": 10.0 * math.log10(sc.p_ue_max_w) + 30.0,
            "n_ue_min": sc.n_ue_min,
            "n_ue_max": sc.n_ue_max,
        },
        "solver": {"tol": sc.solver_tol, "max_iter": sc.solver_max_iter},
    }
