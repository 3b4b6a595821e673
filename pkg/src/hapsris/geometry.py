"""3D node placement: elevation angles and slant distances.

Ground nodes live on a locally flat plane (planar x/y coordinates, z = altitude);
Earth curvature enters only through the slant-distance formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6378e3


@dataclass(frozen=True)
class Position:
    """Cartesian position in meters; z is altitude above ground."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {name}={v!r}")
        if self.z < 0:
            raise ValueError(f"altitude must be >= 0, got z={self.z}")


@dataclass(frozen=True)
class GeometryConstants:
    earth_radius_m: float = EARTH_RADIUS_M
    haps_altitude_m: float = 20e3

    def __post_init__(self) -> None:
        if self.earth_radius_m <= 0:
            raise ValueError("earth radius must be positive")
        if not 0 <= self.haps_altitude_m < self.earth_radius_m:
            raise ValueError("platform altitude must lie in [0, earth radius)")


def elevation_angle(ground: Position, aerial: Position) -> float:
    """Elevation of `aerial` as seen from `ground`, in degrees, in (0, 90].

    Exactly 90 when the aerial node is at zenith (zero horizontal offset).
    """
    if ground == aerial:
        raise ValueError("coincident nodes")
    dz = aerial.z - ground.z
    if dz <= 0:
        raise ValueError("aerial node must be above the ground node")
    horizontal = math.hypot(aerial.x - ground.x, aerial.y - ground.y)
    if horizontal == 0.0:
        return 90.0
    return math.degrees(math.atan2(dz, horizontal))


def slant_distance_3d(elev_deg: float, g: GeometryConstants) -> float:
    """Slant range in meters from a ground node to the platform at altitude H.

    d = sqrt(R^2 sin^2(e) + H^2 + 2 H R) - R sin(e); collapses to H at zenith
    and is strictly decreasing in elevation.
    """
    if not 0.0 < elev_deg <= 90.0:
        raise ValueError(f"elevation must be in (0, 90] degrees, got {elev_deg}")
    r, h = g.earth_radius_m, g.haps_altitude_m
    s = math.sin(math.radians(elev_deg))
    return math.sqrt(r * r * s * s + h * h + 2.0 * h * r) - r * s
