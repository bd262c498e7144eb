"""Random network geometry: node placement, link angles, wall blockage.

Conventions: positions on the ground plane are kilometers, heights and wall
lengths are meters.  A building is a vertical wall whose footprint is a 2D
segment; a link is blocked by every wall that cuts its footprint at a point
where the straight tx-rx path is no higher than the wall top.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import origin_blockage_counts as _fast_origin_counts
from .antenna import AntennaPattern, DipolePattern, QuasiOmniPattern
from .scenario import Scenario

__all__ = [
    "Building",
    "LinkGeometry",
    "MIN_LINK_DISTANCE_KM",
    "NetworkSample",
    "Region",
    "Sector",
    "Tier",
    "Wap",
    "blockage_counts_from_origin",
    "count_blockages",
    "link_geometry",
    "place_network",
    "sample_network",
    "sample_ppp",
    "wrap_angle_deg",
]

# Links shorter than this are clamped before angle/path-loss evaluation; the
# distance-power laws diverge as d -> 0.
MIN_LINK_DISTANCE_KM = 1e-3

_SECTOR_OFFSETS_RAD = np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])


class Tier(enum.Enum):
    MACRO = "macro"
    METRO = "metro"


@dataclass(frozen=True)
class Region:
    """Disc-shaped simulation window."""

    center: tuple[float, float] = (0.0, 0.0)  # km
    radius_km: float = 5.0

    def __post_init__(self) -> None:
        if not self.radius_km > 0.0:
            raise ValueError(f"region radius must be > 0, got {self.radius_km}")

    @property
    def area_km2(self) -> float:
        return math.pi * self.radius_km**2


@dataclass(frozen=True)
class Sector:
    """One antenna face of a wireless access point."""

    boresight_azimuth_rad: float  # [0, 2*pi)
    pattern: AntennaPattern
    downtilt_deg: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.boresight_azimuth_rad < 2.0 * math.pi:
            raise ValueError("boresight_azimuth_rad must be in [0, 2*pi)")
        if not 0.0 <= self.downtilt_deg < 90.0:
            raise ValueError("downtilt_deg must be in [0, 90)")


@dataclass(frozen=True)
class Wap:
    """A placed wireless access point.

    Macro sites carry exactly three sectors whose boresights are 120 degrees
    apart; metro sites carry one horizontally omnidirectional sector.
    """

    tier: Tier
    position: tuple[float, float]  # km
    height_m: float
    tx_power_dbm: float
    sectors: tuple[Sector, ...]

    def __post_init__(self) -> None:
        if not self.height_m > 0.0:
            raise ValueError("height_m must be > 0")
        if self.tier is Tier.MACRO:
            if len(self.sectors) != 3:
                raise ValueError("macro WAPs carry exactly 3 sectors")
            az = sorted(s.boresight_azimuth_rad for s in self.sectors)
            gaps = (az[1] - az[0], az[2] - az[1], az[0] + 2.0 * math.pi - az[2])
            third = 2.0 * math.pi / 3.0
            if any(abs(g - third) > 1e-9 for g in gaps):
                raise ValueError("macro sector boresights must be 120 degrees apart")
        else:
            if len(self.sectors) != 1:
                raise ValueError("metro WAPs carry exactly 1 sector")
            if not isinstance(self.sectors[0].pattern, (DipolePattern, QuasiOmniPattern)):
                raise ValueError("metro sector pattern must be horizontally omnidirectional")


@dataclass(frozen=True)
class Building:
    """A vertical wall: 2D segment footprint plus a height."""

    center: tuple[float, float]  # km
    length_m: float
    orientation_rad: float  # [0, pi)
    height_m: float

    def __post_init__(self) -> None:
        if not self.length_m > 0.0:
            raise ValueError("length_m must be > 0")
        if not self.height_m > 0.0:
            raise ValueError("height_m must be > 0")
        if not 0.0 <= self.orientation_rad < math.pi:
            raise ValueError("orientation_rad must be in [0, pi)")


@dataclass(frozen=True)
class LinkGeometry:
    """Distances and angles of one transmitter-user link."""

    distance_2d_km: float
    distance_3d_km: float
    azimuth_offset_deg: float  # off boresight, wrapped to (-180, 180]
    elevation_deg: float  # > 0 when the transmitter sits above the user


def wrap_angle_deg(angle_deg):
    """Wrap an angle in degrees to (-180, 180]."""
    return 180.0 - np.mod(180.0 - np.asarray(angle_deg, dtype=float), 360.0)


def sample_ppp(density_per_km2: float, region: Region, rng: np.random.Generator) -> np.ndarray:
    """Draw one realization of a homogeneous Poisson process on the region.

    Returns an (n, 2) array of positions in km; n is Poisson with mean
    density * area and positions are independent uniforms on the disc.
    """
    if density_per_km2 < 0.0:
        raise ValueError(f"density must be >= 0, got {density_per_km2}")
    n = rng.poisson(density_per_km2 * region.area_km2)
    radius = region.radius_km * np.sqrt(rng.random(n))
    angle = rng.uniform(0.0, 2.0 * math.pi, n)
    points = np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))
    points += np.asarray(region.center, dtype=float)
    return points


@dataclass(frozen=True)
class NetworkSample:
    """Array form of one network realization (engine-facing)."""

    macro_xy: np.ndarray  # (n1, 2) km
    macro_azimuth0_rad: np.ndarray  # (n1,) first-sector boresights
    metro_xy: np.ndarray  # (n2, 2) km
    building_center_xy: np.ndarray  # (nb, 2) km
    building_length_m: np.ndarray  # (nb,)
    building_height_m: np.ndarray  # (nb,)
    building_orientation_rad: np.ndarray  # (nb,) [0, pi)

    @property
    def n_sectors(self) -> int:
        return 3 * len(self.macro_xy) + len(self.metro_xy)


def sample_network(scenario: Scenario, rng: np.random.Generator) -> NetworkSample:
    """Sample WAP and building positions for one drop.

    Draw order is fixed: macro positions, macro first-sector azimuths, metro
    positions, building centers, lengths, heights, orientations.  Metro
    sectors are omnidirectional and consume no azimuth draw.
    """
    region = Region(center=(0.0, 0.0), radius_km=scenario.region_radius_km)
    macro_xy = sample_ppp(scenario.macro.density_per_km2, region, rng)
    macro_az0 = rng.uniform(0.0, 2.0 * math.pi, len(macro_xy))
    metro_xy = sample_ppp(scenario.metro.density_per_km2, region, rng)
    centers = sample_ppp(scenario.buildings.density_per_km2, region, rng)
    nb = len(centers)
    b = scenario.buildings
    lengths = rng.uniform(b.length_min_m, b.length_max_m, nb)
    heights = rng.uniform(b.height_min_m, b.height_max_m, nb)
    # A segment and its reverse are the same wall, so [0, pi) covers all
    # orientations.
    orientations = rng.uniform(0.0, math.pi, nb)
    return NetworkSample(
        macro_xy=macro_xy,
        macro_azimuth0_rad=macro_az0,
        metro_xy=metro_xy,
        building_center_xy=centers,
        building_length_m=lengths,
        building_height_m=heights,
        building_orientation_rad=orientations,
    )


def place_network(
    scenario: Scenario, rng: np.random.Generator
) -> tuple[list[Wap], list[Building]]:
    """Sample one network drop as typed objects (same draws as sample_network)."""
    net = sample_network(scenario, rng)
    macro_pattern = scenario.macro.pattern()
    metro_ant = scenario.metro.antenna()
    two_pi = 2.0 * math.pi

    waps: list[Wap] = []
    for (x, y), az0 in zip(net.macro_xy, net.macro_azimuth0_rad):
        sectors = tuple(
            Sector(
                boresight_azimuth_rad=(az0 + off) % two_pi,
                pattern=macro_pattern,
                downtilt_deg=scenario.macro.downtilt_deg,
            )
            for off in _SECTOR_OFFSETS_RAD
        )
        waps.append(
            Wap(Tier.MACRO, (float(x), float(y)), scenario.macro.height_m,
                scenario.macro.tx_power_dbm, sectors)
        )
    for x, y in net.metro_xy:
        sector = Sector(0.0, metro_ant.pattern, scenario.metro.downtilt_deg)
        waps.append(
            Wap(Tier.METRO, (float(x), float(y)), scenario.metro.height_m,
                scenario.metro.tx_power_dbm, (sector,))
        )

    buildings = [
        Building((float(cx), float(cy)), float(ln), float(o), float(h))
        for (cx, cy), ln, h, o in zip(
            net.building_center_xy,
            net.building_length_m,
            net.building_height_m,
            net.building_orientation_rad,
        )
    ]
    return waps, buildings


def link_geometry(
    wap: Wap, sector: Sector, user_xy: tuple[float, float], user_height_m: float
) -> LinkGeometry:
    """Distances and angles from a sector toward a user on the ground plane."""
    dx = user_xy[0] - wap.position[0]
    dy = user_xy[1] - wap.position[1]
    d2d = max(math.hypot(dx, dy), MIN_LINK_DISTANCE_KM)
    azimuth_to_user = math.atan2(dy, dx)
    phi = float(wrap_angle_deg(math.degrees(azimuth_to_user - sector.boresight_azimuth_rad)))
    dz_m = wap.height_m - user_height_m
    theta = math.degrees(math.atan2(dz_m, d2d * 1e3))
    d3d = math.hypot(d2d, dz_m * 1e-3)
    return LinkGeometry(
        distance_2d_km=d2d,
        distance_3d_km=d3d,
        azimuth_offset_deg=phi,
        elevation_deg=theta,
    )


def _building_arrays(
    buildings: list[Building],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Wall endpoints (km) and heights (m) from typed buildings."""
    if not buildings:
        empty = np.empty((0, 2))
        return empty, empty, np.empty(0)
    centers = np.array([b.center for b in buildings], dtype=float)
    half_m = np.array([b.length_m for b in buildings], dtype=float) / 2.0
    orient = np.array([b.orientation_rad for b in buildings], dtype=float)
    heights = np.array([b.height_m for b in buildings], dtype=float)
    half_vec = (half_m * 1e-3)[:, None] * np.column_stack((np.cos(orient), np.sin(orient)))
    return centers + half_vec, centers - half_vec, heights


def _crossing_mask(
    ax, ay, bx, by, za_m, zb_m, e1x, e1y, e2x, e2y, wall_h_m
) -> np.ndarray:
    """Elementwise test: does path (a->b, heights za->zb) cut each wall
    below its top?  Endpoint contact counts as a cut; a collinear overlap is
    tested at the midpoint of the overlap.
    """
    rx = bx - ax
    ry = by - ay
    vx = e2x - e1x
    vy = e2y - e1y
    c1 = rx * (e1y - ay) - ry * (e1x - ax)
    c2 = rx * (e2y - ay) - ry * (e2x - ax)
    c3 = vx * (ay - e1y) - vy * (ax - e1x)
    c4 = vx * (by - e1y) - vy * (bx - e1x)
    straddle = (c1 * c2 <= 0.0) & (c3 * c4 <= 0.0)
    denom = c3 - c4
    proper = straddle & (denom != 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(proper, c3 / np.where(denom == 0.0, 1.0, denom), 0.0)
    z_at_cut = za_m + t * (zb_m - za_m)
    crossed = proper & (z_at_cut <= wall_h_m)

    collinear = straddle & (denom == 0.0) & (c1 == 0.0) & (c2 == 0.0)
    if np.any(collinear):
        idx = np.nonzero(np.broadcast_to(collinear, np.shape(crossed)))
        crossed = np.array(crossed, copy=True)
        for flat in zip(*idx):
            pick = lambda arr: float(np.broadcast_to(arr, np.shape(crossed))[flat])
            r2 = pick(rx) ** 2 + pick(ry) ** 2
            if r2 == 0.0:
                continue
            s1 = ((pick(e1x) - pick(ax)) * pick(rx) + (pick(e1y) - pick(ay)) * pick(ry)) / r2
            s2 = ((pick(e2x) - pick(ax)) * pick(rx) + (pick(e2y) - pick(ay)) * pick(ry)) / r2
            lo = max(0.0, min(s1, s2))
            hi = min(1.0, max(s1, s2))
            if lo <= hi:
                z_mid = pick(za_m) + 0.5 * (lo + hi) * (pick(zb_m) - pick(za_m))
                crossed[flat] = z_mid <= pick(wall_h_m)
    return crossed


def count_blockages(
    tx: tuple[float, float, float],
    rx: tuple[float, float, float],
    buildings: list[Building],
) -> int:
    """Number of walls the direct tx-rx path cuts below their tops.

    ``tx`` and ``rx`` are (x_km, y_km, height_m); each wall counts at most
    once.  Endpoint contact counts as a cut.
    """
    if tx == rx:
        raise ValueError("tx and rx must be distinct points")
    if not buildings:
        return 0
    e1, e2, heights = _building_arrays(buildings)
    ax, ay, za = float(tx[0]), float(tx[1]), float(tx[2])
    bx, by, zb = float(rx[0]), float(rx[1]), float(rx[2])
    if ax == bx and ay == by:
        # Vertical path: its footprint is a single point.  A wall blocks it
        # when the footprint lies on the wall segment below the wall top.
        vx, vy = e2[:, 0] - e1[:, 0], e2[:, 1] - e1[:, 1]
        off = (vx * (ay - e1[:, 1]) - vy * (ax - e1[:, 0])) == 0.0
        seg2 = vx**2 + vy**2
        s = ((ax - e1[:, 0]) * vx + (ay - e1[:, 1]) * vy) / seg2
        on_segment = off & (s >= 0.0) & (s <= 1.0)
        return int(np.count_nonzero(on_segment & (min(za, zb) <= heights)))
    mask = _crossing_mask(
        ax, ay, bx, by, za, zb, e1[:, 0], e1[:, 1], e2[:, 0], e2[:, 1], heights
    )
    return int(np.count_nonzero(mask))


def blockage_counts_from_origin(
    wap_xy: np.ndarray,
    wap_height_m: np.ndarray,
    user_height_m: float,
    wall_e1: np.ndarray,
    wall_e2: np.ndarray,
    wall_height_m: np.ndarray,
) -> np.ndarray:
    """Wall-cut counts for every path from the origin user to each WAP.

    Batched origin-anchored version of `count_blockages`.  Any point where a
    path cuts a wall has the same bearing as the WAP itself, so only walls
    whose subtended bearing interval contains the WAP bearing need the exact
    test.  Dispatches to the numba kernel when available; both paths apply
    the same arithmetic.
    """
    wap_xy = np.ascontiguousarray(wap_xy, dtype=float).reshape(-1, 2)
    wap_height_m = np.ascontiguousarray(wap_height_m, dtype=float)
    wall_e1 = np.ascontiguousarray(wall_e1, dtype=float).reshape(-1, 2)
    wall_e2 = np.ascontiguousarray(wall_e2, dtype=float).reshape(-1, 2)
    wall_height_m = np.ascontiguousarray(wall_height_m, dtype=float)
    if _fast_origin_counts is not None:
        return _fast_origin_counts(
            wap_xy, wap_height_m, float(user_height_m), wall_e1, wall_e2, wall_height_m
        )
    return _origin_counts_numpy(
        wap_xy, wap_height_m, float(user_height_m), wall_e1, wall_e2, wall_height_m
    )


def _origin_counts_numpy(
    wap_xy: np.ndarray,
    wap_height_m: np.ndarray,
    user_height_m: float,
    wall_e1: np.ndarray,
    wall_e2: np.ndarray,
    wall_height_m: np.ndarray,
) -> np.ndarray:
    """Pure-numpy implementation of `blockage_counts_from_origin`."""
    n_w = len(wap_xy)
    n_b = len(wall_e1)
    if n_w == 0 or n_b == 0:
        return np.zeros(n_w, dtype=np.int64)

    psi1 = np.arctan2(wall_e1[:, 1], wall_e1[:, 0])
    psi2 = np.arctan2(wall_e2[:, 1], wall_e2[:, 0])
    spread = np.mod(psi2 - psi1 + math.pi, 2.0 * math.pi) - math.pi  # [-pi, pi)
    half_width = 0.5 * np.abs(spread) + 1e-9
    center = psi1 + 0.5 * spread

    # Walls running (numerically) through the origin subtend no usable
    # interval; test them against every path.
    vx = wall_e2[:, 0] - wall_e1[:, 0]
    vy = wall_e2[:, 1] - wall_e1[:, 1]
    seg2 = vx**2 + vy**2
    s = np.clip(-(wall_e1[:, 0] * vx + wall_e1[:, 1] * vy) / seg2, 0.0, 1.0)
    near2 = (wall_e1[:, 0] + s * vx) ** 2 + (wall_e1[:, 1] + s * vy) ** 2
    at_origin = near2 < 1e-24

    alpha = np.arctan2(wap_xy[:, 1], wap_xy[:, 0])
    order = np.argsort(alpha, kind="stable")
    alpha_sorted = alpha[order]
    alpha_ext = np.concatenate((alpha_sorted, alpha_sorted + 2.0 * math.pi))
    wap_ext = np.concatenate((order, order))

    lo = np.mod(center - half_width + math.pi, 2.0 * math.pi) - math.pi
    hi = lo + 2.0 * half_width
    start = np.searchsorted(alpha_ext, lo, side="left")
    stop = np.searchsorted(alpha_ext, hi, side="right")
    start = np.where(at_origin, 0, start)
    stop = np.where(at_origin, n_w, stop)

    counts = stop - start
    total = int(counts.sum())
    if total == 0:
        return np.zeros(n_w, dtype=np.int64)
    pair_wall = np.repeat(np.arange(n_b), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pair_pos = np.arange(total) - np.repeat(offsets, counts) + np.repeat(start, counts)
    pair_wap = wap_ext[pair_pos]

    bx = wap_xy[pair_wap, 0]
    by = wap_xy[pair_wap, 1]
    zb = wap_height_m[pair_wap]
    mask = _crossing_mask(
        0.0,
        0.0,
        bx,
        by,
        float(user_height_m),
        zb,
        wall_e1[pair_wall, 0],
        wall_e1[pair_wall, 1],
        wall_e2[pair_wall, 0],
        wall_e2[pair_wall, 1],
        wall_height_m[pair_wall],
    )
    return np.bincount(pair_wap[mask], minlength=n_w).astype(np.int64)
