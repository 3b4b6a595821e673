"""Power-consumption accounting and energy efficiency."""

from __future__ import annotations

from dataclasses import dataclass

from .ris import ACTIVE, PASSIVE


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    if x_w <= 0:
        raise ValueError(f"power must be positive, got {x_w}")
    import math

    return 10.0 * math.log10(x_w) + 30.0


@dataclass(frozen=True)
class PowerModel:
    """Constant terms of the payload power budget.

    Per-element terms cover phase-shifter switching and element biasing;
    per-amplifier and per-user-device terms are added on top of the radiated
    power and the static station draw.
    """

    p_static_w: float
    p_switch_w: float
    p_bias_w: float
    p_amplifier_w: float
    p_ue_circuit_w: float
    mode: str = ACTIVE

    def __post_init__(self) -> None:
        for name in ("p_static_w", "p_switch_w", "p_bias_w", "p_amplifier_w", "p_ue_circuit_w"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.mode not in (ACTIVE, PASSIVE):
            raise ValueError(f"mode must be 'active' or 'passive', got {self.mode!r}")


def total_power(
    pm: PowerModel, p_transmit_w: float, n_elements: int, n_amplifiers: int, n_ues: int
) -> float:
    """P_t + static + N*(switch + bias) + Q*amplifier + K*device, in watts.

    A passive surface powers no amplifiers regardless of the count passed in.
    """
    if min(n_elements, n_amplifiers, n_ues) < 0:
        raise ValueError("counts must be >= 0")
    if p_transmit_w < 0:
        raise ValueError("transmit power must be >= 0")
    q = 0 if pm.mode == PASSIVE else n_amplifiers
    return (
        p_transmit_w
        + pm.p_static_w
        + n_elements * pm.p_switch_w
        + n_elements * pm.p_bias_w
        + q * pm.p_amplifier_w
        + n_ues * pm.p_ue_circuit_w
    )


def energy_efficiency(sum_rate_bps: float, total_power_w: float) -> float:
    """Delivered bits per joule."""
    if total_power_w <= 0:
        raise ValueError("total power must be positive")
    return sum_rate_bps / total_power_w
