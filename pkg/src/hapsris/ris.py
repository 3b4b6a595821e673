"""Active/passive reflecting-surface model.

Covers amplifier grouping (a group of `group_size` elements shares one power
amplifier), the amplification-gain budget bound, the closed-form per-user SNR
under ideal phase alignment, achievable rate, and phase quantization effects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ACTIVE = "active"
PASSIVE = "passive"


@dataclass(frozen=True)
class RisConfig:
    """Surface-level parameters shared by every allocation on the platform."""

    n_total: int
    group_size: int
    pa_power_w: float
    dynamic_noise_w: float
    mode: str = ACTIVE
    phase_bits: int | None = None

    def __post_init__(self) -> None:
        if self.n_total < 1:
            raise ValueError("element count must be >= 1")
        if self.group_size < 1:
            raise ValueError("amplifier group size must be >= 1")
        if self.mode not in (ACTIVE, PASSIVE):
            raise ValueError(f"mode must be 'active' or 'passive', got {self.mode!r}")
        if self.dynamic_noise_w < 0:
            raise ValueError("dynamic noise power must be >= 0")
        if self.phase_bits is not None and self.phase_bits < 1:
            raise ValueError("phase quantization needs >= 1 bit")

    @property
    def n_amplifiers(self) -> int:
        """Installed amplifier count; a passive surface has none."""
        if self.mode == PASSIVE:
            return 0
        return math.ceil(self.n_total / self.group_size)


@dataclass(frozen=True)
class UeLink:
    """Per-user cascade gains and resources feeding the SNR closed form."""

    h_gain_sq: float
    g_gain_sq: float
    n_elements: float
    tx_power_w: float
    noise_floor_w: float

    def __post_init__(self) -> None:
        for name in ("h_gain_sq", "g_gain_sq", "n_elements", "tx_power_w", "noise_floor_w"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def amplification_gain(cfg: RisConfig, p_incident_w: float, h_gain_sq: float) -> float:
    """Largest reflection gain the per-amplifier power budget allows.

    The budget is shared by one group: beta = sqrt(P_A / (P_in * T * |h|^2
    + sigma_z^2)). A passive surface reflects with unit gain.
    """
    if cfg.mode == PASSIVE:
        return 1.0
    if cfg.pa_power_w <= 0:
        raise ValueError("active mode requires positive amplifier power")
    if p_incident_w < 0:
        raise ValueError("incident power must be >= 0")
    group_power = p_incident_w * cfg.group_size * h_gain_sq
    return math.sqrt(cfg.pa_power_w / (group_power + cfg.dynamic_noise_w))


def snr(link: UeLink, beta: float, cfg: RisConfig) -> float:
    """Received SNR under ideal phase alignment.

    gamma = P * beta^2 * N^2 * |h|^2 * |g|^2 / (beta^2 * N * |g|^2 * sigma_z^2
    + n0); a passive surface has beta = 1 and injects no dynamic noise.
    """
    if beta <= 0:
        raise ValueError("reflection gain must be positive")
    sigma_z_sq = 0.0 if cfg.mode == PASSIVE else cfg.dynamic_noise_w
    b2 = beta * beta
    n = link.n_elements
    signal = link.tx_power_w * b2 * n * n * link.h_gain_sq * link.g_gain_sq
    noise = b2 * n * link.g_gain_sq * sigma_z_sq + link.noise_floor_w
    return signal / noise


def rate(gamma: float, bandwidth_hz: float) -> float:
    """Achievable rate B * log2(1 + gamma) in bits/s."""
    if gamma < 0:
        raise ValueError("SNR must be >= 0")
    return bandwidth_hz * math.log2(1.0 + gamma)


def quantize_phase(phi: float, bits: int) -> float:
    """Snap a phase to the nearest of 2^bits uniform levels on [0, 2*pi).

    Wraps modulo 2*pi; a tie between two levels rounds down.
    """
    if bits < 1:
        raise ValueError("need at least one quantization bit")
    levels = 2**bits
    step = 2.0 * math.pi / levels
    k = math.ceil(phi / step - 0.5)  # round half down
    return (k % levels) * step


def quantized_coherence_loss(bits: int, n_elements: int, seed: int, draws: int = 256) -> float:
    """Monte-Carlo coherent-combining factor under phase quantization.

    Estimates E |sum_i exp(j*d_i)|^2 / N^2 where d_i is the quantization error
    of a uniformly random phase. 1.0 means no loss; deterministic given seed.
    """
    if bits < 1:
        raise ValueError("need at least one quantization bit")
    if n_elements < 1:
        raise ValueError("element count must be >= 1")
    rng = np.random.default_rng(seed)
    # Quantization error of a uniform phase is uniform on +-step/2.
    step = 2.0 * math.pi / 2**bits
    errors = rng.uniform(-step / 2.0, step / 2.0, size=(draws, n_elements))
    phasors = np.exp(1j * errors).mean(axis=1)
    return float(np.mean(np.abs(phasors) ** 2))
