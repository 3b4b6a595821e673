"""Elevation-dependent path loss and per-element channel gains.

Each link (control station -> platform, platform -> user) gets a LinkBudget:
free-space loss plus clutter, shadow, gas, scintillation and entry terms,
blended between LoS and NLoS conditions by an elevation-fitted probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import GeometryConstants, slant_distance_3d

ELEVATION_BUCKETS = tuple(range(10, 100, 10))


class ChannelTableError(KeyError):
    """A clutter/shadow table is missing a required elevation bucket."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError(f"linear value must be positive, got {x}")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ChannelParams:
    """Environment fit coefficients and fixed loss terms, all in dB.

    `clutter_loss_nlos_db` and the two shadow tables map 10-degree elevation
    buckets (10..90) to dB values; they are configuration, never defaults
    baked into the engine.
    """

    c1: float
    c2: float
    c3: float
    l_gas_db: float
    l_entry_db: float
    scint_coeff: float
    scint_exp: float
    clutter_loss_los_db: float
    clutter_loss_nlos_db: dict[int, float]
    shadow_los_db: dict[int, float]
    shadow_nlos_db: dict[int, float]
    carrier_ghz: float

    def __post_init__(self) -> None:
        if self.carrier_ghz <= 0:
            raise ValueError("carrier frequency must be positive")
        for name in ("l_gas_db", "l_entry_db", "clutter_loss_los_db"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class LinkBudget:
    """All per-link loss terms for one ground<->platform hop."""

    elevation_deg: float
    p_los: float
    fspl_db: float
    pl_los_db: float
    pl_nlos_db: float
    pl_total_db: float
    antenna_gain_tx_db: float = 0.0
    antenna_gain_rx_db: float = 0.0


def los_probability(elev_deg: float, p: ChannelParams) -> float:
    """LoS probability from the percent-valued power-law fit, clamped to [0, 1]."""
    if not 10.0 <= elev_deg <= 90.0:
        raise ValueError(
            f"elevation outside LoS-fit domain [10, 90]: {elev_deg}"
        )
    percent = p.c1 * elev_deg**p.c2 + p.c3
    return min(1.0, max(0.0, percent / 100.0))


def fspl(f_ghz: float, d_m: float) -> float:
    """Free-space propagation loss in dB, frequency in GHz, distance in meters."""
    if f_ghz <= 0 or d_m <= 0:
        raise ValueError("frequency and distance must be positive")
    return 32.45 + 20.0 * math.log10(f_ghz) + 20.0 * math.log10(d_m)


def scintillation_loss(elev_deg: float, p: ChannelParams) -> float:
    """Tropospheric scintillation attenuation a * elev^b in dB."""
    if elev_deg <= 0:
        raise ValueError("elevation must be positive")
    return p.scint_coeff * elev_deg**p.scint_exp


def elevation_bucket(elev_deg: float) -> int:
    """Nearest 10-degree table bucket, clamped to the 10..90 fit range."""
    return int(min(90, max(10, round(elev_deg / 10.0) * 10)))


def _table_value(table: dict[int, float], bucket: int, name: str) -> float:
    try:
        return table[bucket]
    except KeyError:
        raise ChannelTableError(
            f"incomplete channel table: {name} has no {bucket} degree bucket"
        ) from None


def path_loss(
    elev_deg: float,
    p: ChannelParams,
    g: GeometryConstants,
    *,
    gain_tx_db: float = 0.0,
    gain_rx_db: float = 0.0,
    blend: str = "db",
) -> LinkBudget:
    """Full link budget at one elevation.

    Conditional losses are L^cond = FSPL + CL^cond + X^cond + L_gas + L_scint
    + L_entry; the LoS/NLoS blend is a probability-weighted sum, in dB by
    default (`blend="linear"` averages the linear losses instead, exposed for
    sensitivity checks).
    """
    if blend not in ("db", "linear"):
        raise ValueError(f"blend must be 'db' or 'linear', got {blend!r}")
    d3d = slant_distance_3d(elev_deg, g)
    basic = fspl(p.carrier_ghz, d3d)
    p_los = los_probability(elev_deg, p)
    l_scint = scintillation_loss(elev_deg, p)
    bucket = elevation_bucket(elev_deg)

    common = p.l_gas_db + l_scint + p.l_entry_db
    pl_los = (
        basic
        + p.clutter_loss_los_db
        + _table_value(p.shadow_los_db, bucket, "shadow_los_db")
        + common
    )
    pl_nlos = (
        basic
        + _table_value(p.clutter_loss_nlos_db, bucket, "clutter_loss_nlos_db")
        + _table_value(p.shadow_nlos_db, bucket, "shadow_nlos_db")
        + common
    )
    if blend == "db":
        total = p_los * pl_los + (1.0 - p_los) * pl_nlos
    else:
        total = linear_to_db(
            p_los * db_to_linear(pl_los) + (1.0 - p_los) * db_to_linear(pl_nlos)
        )
    return LinkBudget(
        elevation_deg=elev_deg,
        p_los=p_los,
        fspl_db=basic,
        pl_los_db=pl_los,
        pl_nlos_db=pl_nlos,
        pl_total_db=total,
        antenna_gain_tx_db=gain_tx_db,
        antenna_gain_rx_db=gain_rx_db,
    )


def element_channel_gains(
    lb_cs_haps: LinkBudget, lb_haps_ue: LinkBudget
) -> tuple[float, float]:
    """Per-element linear power gains (|h|^2, |g|^2) of the two hops.

    Phases drop out: with ideal alignment only magnitudes enter the SNR.
    """
    h_sq = db_to_linear(lb_cs_haps.antenna_gain_tx_db - lb_cs_haps.pl_total_db)
    g_sq = db_to_linear(lb_haps_ue.antenna_gain_rx_db - lb_haps_ue.pl_total_db)
    return h_sq, g_sq
