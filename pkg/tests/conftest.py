"""Shared scene builders and independent reference oracles."""

from __future__ import annotations

import math

import numpy as np

from hetnetsim.antenna import metro_antenna
from hetnetsim.channel import PathLossModel, mean_rx_power_dbm
from hetnetsim.geometry import Building, Sector, Tier, Wap
from hetnetsim.scenario import MacroConfig

MACRO_PATHLOSS = PathLossModel(128.1, 37.6, Tier.MACRO)
METRO_PATHLOSS = PathLossModel(140.7, 36.7, Tier.METRO)
PATHLOSS_BY_TIER = {Tier.MACRO: MACRO_PATHLOSS, Tier.METRO: METRO_PATHLOSS}

ORACLE_STEP_KM = 1e-5  # 1 cm march resolution


def make_macro(xy, first_azimuth_rad=0.0, height_m=30.0, tx_power_dbm=46.0, downtilt_deg=10.0):
    pattern = MacroConfig().pattern()
    two_pi = 2.0 * math.pi
    sectors = tuple(
        Sector((first_azimuth_rad + k * two_pi / 3.0) % two_pi, pattern, downtilt_deg)
        for k in range(3)
    )
    return Wap(Tier.MACRO, xy, height_m, tx_power_dbm, sectors)


def make_metro(xy, pattern_name="quasi_omni", height_m=5.0, tx_power_dbm=33.0, downtilt_deg=0.0):
    sector = Sector(0.0, metro_antenna(pattern_name).pattern, downtilt_deg)
    return Wap(Tier.METRO, xy, height_m, tx_power_dbm, (sector,))


def random_buildings(rng, n, span_km=0.3, height_range=(0.5, 25.0), length_range=(5.0, 40.0)):
    return [
        Building(
            center=(rng.uniform(-span_km, span_km), rng.uniform(-span_km, span_km)),
            length_m=rng.uniform(*length_range),
            orientation_rad=rng.uniform(0.0, math.pi),
            height_m=rng.uniform(*height_range),
        )
        for _ in range(n)
    ]


def random_waps(rng, n_macro, n_metro, span_km=1.0):
    waps = []
    for _ in range(n_macro):
        waps.append(
            make_macro(
                (rng.uniform(-span_km, span_km), rng.uniform(-span_km, span_km)),
                first_azimuth_rad=rng.uniform(0.0, 2.0 * math.pi),
            )
        )
    for _ in range(n_metro):
        waps.append(
            make_metro((rng.uniform(-span_km, span_km), rng.uniform(-span_km, span_km)))
        )
    return waps


def oracle_associate(waps, user_xy, user_height_m, buildings, bias_db, pathloss_by_tier, attenuation_db):
    """Literal three-step reference: every sector enumerated, interference
    summed directly, bias rule applied verbatim."""
    powers = {}
    for i, wap in enumerate(waps):
        for j, sector in enumerate(wap.sectors):
            powers[(i, j)] = mean_rx_power_dbm(
                wap, sector, user_xy, user_height_m, buildings,
                pathloss_by_tier[wap.tier], attenuation_db,
            )
    total_linear = sum(10.0 ** (p / 10.0) for p in powers.values())

    def asair(key):
        desired = 10.0 ** (powers[key] / 10.0)
        return 10.0 * math.log10(desired / (total_linear - desired))

    def best(tier):
        choice, choice_p = None, -math.inf
        for key, p in powers.items():
            if waps[key[0]].tier is tier and p > choice_p:
                choice, choice_p = key, p
        return choice

    macro_best = best(Tier.MACRO)
    metro_best = best(Tier.METRO)
    if macro_best is None:
        return Tier.METRO, metro_best
    if metro_best is None:
        return Tier.MACRO, macro_best
    if asair(metro_best) >= asair(macro_best) - bias_db:
        return Tier.METRO, metro_best
    return Tier.MACRO, macro_best


def _wall_endpoints(building):
    cx, cy = building.center
    half_km = building.length_m * 1e-3 / 2.0
    ux = math.cos(building.orientation_rad)
    uy = math.sin(building.orientation_rad)
    return (
        (cx + half_km * ux, cy + half_km * uy),
        (cx - half_km * ux, cy - half_km * uy),
    )


def oracle_wall_blocked(tx, rx, building, step_km=ORACLE_STEP_KM):
    """Ray-march reference for one wall: sample the path every step and test
    point proximity to the wall footprint; judge the height at the closest
    sample."""
    ax, ay, za = tx
    bx, by, zb = rx
    length = math.hypot(bx - ax, by - ay)
    n = max(2, int(math.ceil(length / step_km)) + 1)
    t = np.linspace(0.0, 1.0, n)
    px = ax + t * (bx - ax)
    py = ay + t * (by - ay)
    (e1x, e1y), (e2x, e2y) = _wall_endpoints(building)
    vx, vy = e2x - e1x, e2y - e1y
    seg2 = vx * vx + vy * vy
    s = np.clip(((px - e1x) * vx + (py - e1y) * vy) / seg2, 0.0, 1.0)
    dist = np.hypot(px - (e1x + s * vx), py - (e1y + s * vy))
    near = dist <= step_km / 2.0
    if not near.any():
        return False
    k = int(np.argmin(np.where(near, dist, np.inf)))
    z = za + t[k] * (zb - za)
    return z <= building.height_m


def _point_segment_distance(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    seg2 = vx * vx + vy * vy
    if seg2 == 0.0:
        return math.hypot(px - ax, py - ay)
    s = max(0.0, min(1.0, ((px - ax) * vx + (py - ay) * vy) / seg2))
    return math.hypot(px - (ax + s * vx), py - (ay + s * vy))


def oracle_borderline(tx, rx, building, step_km=ORACLE_STEP_KM):
    """Configurations the march cannot adjudicate at its resolution:
    near-tangent footprints, cuts grazing the wall top or any segment end,
    and collinear overlaps.  These are excluded from oracle comparisons."""
    ax, ay, za = tx
    bx, by, zb = rx
    (e1x, e1y), (e2x, e2y) = _wall_endpoints(building)
    rx_, ry_ = bx - ax, by - ay
    vx, vy = e2x - e1x, e2y - e1y
    c1 = rx_ * (e1y - ay) - ry_ * (e1x - ax)
    c2 = rx_ * (e2y - ay) - ry_ * (e2x - ax)
    c3 = vx * (ay - e1y) - vy * (ax - e1x)
    c4 = vx * (by - e1y) - vy * (bx - e1x)
    intersects = c1 * c2 <= 0.0 and c3 * c4 <= 0.0

    if intersects and c3 != c4:
        t = c3 / (c3 - c4)
        cut_x = ax + t * rx_
        cut_y = ay + t * ry_
        z = za + t * (zb - za)
        if abs(z - building.height_m) < 0.05:  # grazing the wall top (m)
            return True
        ends = ((ax, ay), (bx, by), (e1x, e1y), (e2x, e2y))
        if any(math.hypot(cut_x - x, cut_y - y) <= 2.0 * step_km for x, y in ends):
            return True
        return False
    if intersects:  # collinear overlap
        return True
    # Near-tangent: the footprints come within the march resolution.
    dmin = min(
        _point_segment_distance(e1x, e1y, ax, ay, bx, by),
        _point_segment_distance(e2x, e2y, ax, ay, bx, by),
        _point_segment_distance(ax, ay, e1x, e1y, e2x, e2y),
        _point_segment_distance(bx, by, e1x, e1y, e2x, e2y),
    )
    return dmin <= 2.0 * step_km
