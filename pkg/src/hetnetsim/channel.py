"""Per-link received power: transmit power, 3D gain, path loss, wall shadowing.

The fading-averaged receive power of a link in dBm is

    P_rx = P_tx + G(phi, theta, tilt) - L(d_3d) + K * gamma,

with L the distance power law (d in km), K the number of walls cutting the
path, and gamma the per-wall attenuation in dB.  Instantaneous power adds a
unit-mean exponential factor (Rayleigh amplitude) on top of the mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Building, Sector, Tier, Wap, count_blockages, link_geometry

__all__ = [
    "PathLossModel",
    "db_to_linear",
    "draw_fading",
    "linear_to_db",
    "mean_rx_power_dbm",
    "path_loss_db",
    "shadow_db",
]


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance power law ``intercept + slope * log10(d_km)``."""

    intercept_db: float
    slope_db_per_decade: float
    tier: Tier | None = None

    def __post_init__(self) -> None:
        if not self.slope_db_per_decade > 0.0:
            raise ValueError("slope_db_per_decade must be > 0")


def path_loss_db(model: PathLossModel, distance_km):
    """Path loss in dB at the given distance(s) in km."""
    return model.intercept_db + model.slope_db_per_decade * np.log10(
        np.asarray(distance_km, dtype=float)
    )


def shadow_db(crossing_count, attenuation_db: float):
    """Total shadowing in dB for ``crossing_count`` walls on the path."""
    return np.asarray(crossing_count) * attenuation_db


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def draw_fading(rng: np.random.Generator, size=None):
    """Small-scale power fading: unit-mean exponential draws."""
    return rng.standard_exponential(size)


def mean_rx_power_dbm(
    wap: Wap,
    sector: Sector,
    user_xy: tuple[float, float],
    user_height_m: float,
    buildings: list[Building],
    pathloss: PathLossModel,
    attenuation_db: float,
) -> float:
    """Fading-averaged receive power of one sector-user link, in dBm."""
    geom = link_geometry(wap, sector, user_xy, user_height_m)
    gain = sector.pattern.total_gain_dbi(
        geom.azimuth_offset_deg, geom.elevation_deg, sector.downtilt_deg
    )
    crossings = count_blockages(
        (wap.position[0], wap.position[1], wap.height_m),
        (user_xy[0], user_xy[1], user_height_m),
        buildings,
    )
    return float(
        wap.tx_power_dbm
        + gain
        - path_loss_db(pathloss, geom.distance_3d_km)
        + shadow_db(crossings, attenuation_db)
    )
