"""Seeded Monte Carlo drops, aggregation, sweeps, and the cell-radius rule.

Each drop places one random network around a probe user at the origin,
associates the user, draws one fading realization per sector link, and
records the resulting signal-to-interference ratio.  Drop ``i`` of a run
draws from a stream derived as ``SeedSequence(master_seed,
spawn_key=(i, attempt))``, so results are independent of execution order
and worker count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .geometry import (
    MIN_LINK_DISTANCE_KM,
    NetworkSample,
    Tier,
    blockage_counts_from_origin,
    sample_network,
    wrap_angle_deg,
)
from .antenna import metro_antenna
from .association import DegenerateNetworkError, step3_prefers_metro
from .scenario import PowerMode, Scenario, metro_tx_power_dbm, validate_scenario

__all__ = [
    "DropResult",
    "NetworkMetrics",
    "SectorPowers",
    "aggregate",
    "cell_radius",
    "evaluate_sample",
    "result_row",
    "run_drop",
    "run_many",
    "run_sweep",
    "sector_mean_powers",
    "sweep_scenarios",
]

# A drop needs at least one interferer next to the serving sector.
MAX_DROP_RETRIES = 8

_SECTOR_OFFSETS_RAD = np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])


@dataclass(frozen=True)
class DropResult:
    """Outcome of one Monte Carlo drop for the origin user."""

    tier: Tier
    spectral_efficiency: float  # b/s/Hz, log2(1 + SIR)
    sir_db: float
    serving_blockages: int  # walls on the serving path


@dataclass(frozen=True)
class NetworkMetrics:
    """Aggregated drop statistics."""

    ase_bps_hz_km2: float
    ase_stderr: float
    avg_rate_bps_hz: float
    rate_stderr: float
    metro_fraction: float
    macro_rate_bps_hz: float
    metro_rate_bps_hz: float
    macro_drops: int
    metro_drops: int


@dataclass(frozen=True)
class SectorPowers:
    """Fading-averaged receive power of every sector, origin user."""

    power_dbm: np.ndarray  # (S,) macro sectors wap-major, then metros
    n_macro_sectors: int
    wap_index: np.ndarray  # (S,) macros 0..n1-1, metros n1..n1+n2-1
    sector_index: np.ndarray  # (S,) 0..2 for macros, 0 for metros
    wap_blockages: np.ndarray  # (n1+n2,) walls on each WAP-user path


def sector_mean_powers(
    scenario: Scenario, net: NetworkSample, *, blockage_enabled: bool = True
) -> SectorPowers:
    """Evaluate the mean link budget of every sector toward the origin."""
    n1 = len(net.macro_xy)
    n2 = len(net.metro_xy)
    user_h = scenario.user_height_m

    wap_xy = np.vstack((net.macro_xy.reshape(n1, 2), net.metro_xy.reshape(n2, 2)))
    wap_z = np.concatenate(
        (np.full(n1, scenario.macro.height_m), np.full(n2, scenario.metro.height_m))
    )
    if blockage_enabled and len(net.building_center_xy):
        orient = net.building_orientation_rad
        half_km = (net.building_length_m * 1e-3 / 2.0)[:, None] * np.column_stack(
            (np.cos(orient), np.sin(orient))
        )
        crossings = blockage_counts_from_origin(
            wap_xy,
            wap_z,
            user_h,
            net.building_center_xy + half_km,
            net.building_center_xy - half_km,
            net.building_height_m,
        )
    else:
        crossings = np.zeros(n1 + n2, dtype=np.int64)
    shadow = crossings * scenario.buildings.attenuation_db

    parts = []
    if n1:
        macro = scenario.macro
        pattern = macro.pattern()
        dx = -net.macro_xy[:, 0]
        dy = -net.macro_xy[:, 1]
        d2d = np.maximum(np.hypot(dx, dy), MIN_LINK_DISTANCE_KM)
        dz_m = macro.height_m - user_h
        theta = np.degrees(np.arctan2(dz_m, d2d * 1e3))
        d3d = np.hypot(d2d, dz_m * 1e-3)
        loss = macro.pathloss_intercept_db + macro.pathloss_slope_db * np.log10(d3d)
        azimuth_to_user = np.arctan2(dy, dx)
        boresights = net.macro_azimuth0_rad[:, None] + _SECTOR_OFFSETS_RAD[None, :]
        phi = wrap_angle_deg(np.degrees(azimuth_to_user[:, None] - boresights))
        gain = pattern.total_gain_dbi(phi, theta[:, None], macro.downtilt_deg)
        p = macro.tx_power_dbm + gain
        p = p - loss[:, None]
        p = p + shadow[:n1, None]
        parts.append(p.ravel())
    if n2:
        metro = scenario.metro
        pattern = metro.antenna().pattern
        d2d = np.maximum(np.hypot(net.metro_xy[:, 0], net.metro_xy[:, 1]), MIN_LINK_DISTANCE_KM)
        dz_m = metro.height_m - user_h
        theta = np.degrees(np.arctan2(dz_m, d2d * 1e3))
        d3d = np.hypot(d2d, dz_m * 1e-3)
        loss = metro.pathloss_intercept_db + metro.pathloss_slope_db * np.log10(d3d)
        gain = pattern.total_gain_dbi(0.0, theta, metro.downtilt_deg)
        p = metro.tx_power_dbm + gain
        p = p - loss
        p = p + shadow[n1:]
        parts.append(p)

    power = np.concatenate(parts) if parts else np.empty(0)
    wap_index = np.concatenate(
        (np.repeat(np.arange(n1), 3), np.arange(n1, n1 + n2))
    ).astype(np.int64)
    sector_index = np.concatenate(
        (np.tile(np.arange(3), n1), np.zeros(n2, dtype=np.int64))
    ).astype(np.int64)
    return SectorPowers(
        power_dbm=power,
        n_macro_sectors=3 * n1,
        wap_index=wap_index,
        sector_index=sector_index,
        wap_blockages=crossings,
    )


def _decide_serving(powers: SectorPowers, bias_db: float, linear: np.ndarray) -> int:
    """Flat index of the serving sector (association steps 1-3)."""
    dbm = powers.power_dbm
    n_ms = powers.n_macro_sectors
    if len(dbm) < 2:
        raise DegenerateNetworkError("need at least two sectors to form an SIR")
    total = linear.sum()

    best_macro = int(np.argmax(dbm[:n_ms])) if n_ms else None
    best_metro = int(n_ms + np.argmax(dbm[n_ms:])) if len(dbm) > n_ms else None
    if best_macro is None:
        return best_metro
    if best_metro is None:
        return best_macro
    asair_macro = 10.0 * np.log10(linear[best_macro] / (total - linear[best_macro]))
    asair_metro = 10.0 * np.log10(linear[best_metro] / (total - linear[best_metro]))
    if step3_prefers_metro(asair_macro, asair_metro, bias_db):
        return best_metro
    return best_macro


def evaluate_sample(
    scenario: Scenario,
    net: NetworkSample,
    *,
    fading: np.ndarray | None = None,
    blockage_enabled: bool = True,
) -> DropResult:
    """Associate the origin user and score one already-sampled network.

    ``fading`` holds one linear power factor per sector in sector order;
    None means unit fading on every link.
    """
    powers = sector_mean_powers(scenario, net, blockage_enabled=blockage_enabled)
    mean_linear = 10.0 ** (powers.power_dbm / 10.0)
    serving = _decide_serving(powers, scenario.sir_bias_db, mean_linear)

    inst = mean_linear if fading is None else mean_linear * fading
    desired = inst[serving]
    interference = inst.sum() - desired
    if interference <= 0.0:
        raise DegenerateNetworkError("no interference power on this drop")
    sir = desired / interference
    tier = Tier.MACRO if serving < powers.n_macro_sectors else Tier.METRO
    return DropResult(
        tier=tier,
        spectral_efficiency=float(np.log2(1.0 + sir)),
        sir_db=float(10.0 * np.log10(sir)),
        serving_blockages=int(powers.wap_blockages[powers.wap_index[serving]]),
    )


def run_drop(
    scenario: Scenario,
    drop_index: int,
    *,
    unit_fading: bool = False,
    blockage_enabled: bool = True,
) -> DropResult:
    """Run one seeded drop; resamples degenerate (< 2 sector) networks."""
    if drop_index < 0:
        raise ValueError("drop_index must be >= 0")
    last_error: DegenerateNetworkError | None = None
    for attempt in range(MAX_DROP_RETRIES):
        rng = np.random.default_rng(
            np.random.SeedSequence(scenario.master_seed, spawn_key=(drop_index, attempt))
        )
        net = sample_network(scenario, rng)
        if net.n_sectors < 2:
            last_error = DegenerateNetworkError(
                f"drop {drop_index}: {net.n_sectors} sectors in the window"
            )
            continue
        fading = None if unit_fading else rng.standard_exponential(net.n_sectors)
        return evaluate_sample(
            scenario, net, fading=fading, blockage_enabled=blockage_enabled
        )
    raise DegenerateNetworkError(
        f"drop {drop_index} stayed degenerate after {MAX_DROP_RETRIES} attempts: {last_error}"
    )


def _drop_batch(args) -> list[DropResult]:
    scenario, start, stop, unit_fading, blockage_enabled = args
    return [
        run_drop(scenario, i, unit_fading=unit_fading, blockage_enabled=blockage_enabled)
        for i in range(start, stop)
    ]


def run_many(
    scenario: Scenario,
    *,
    workers: int = 1,
    executor: ProcessPoolExecutor | None = None,
    unit_fading: bool = False,
    blockage_enabled: bool = True,
) -> list[DropResult]:
    """Run ``scenario.drops`` drops, in drop-index order.

    The result is identical for any worker count: every drop owns a stream
    derived from its index, and batches are concatenated in index order.
    """
    validate_scenario(scenario)
    n = scenario.drops
    if workers <= 1 and executor is None:
        return _drop_batch((scenario, 0, n, unit_fading, blockage_enabled))

    n_batches = min(n, max(workers, 1) * 4)
    bounds = np.linspace(0, n, n_batches + 1).astype(int)
    tasks = [
        (scenario, int(a), int(b), unit_fading, blockage_enabled)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    local = executor is None
    pool = executor or ProcessPoolExecutor(max_workers=workers)
    try:
        results: list[DropResult] = []
        for batch in pool.map(_drop_batch, tasks):
            results.extend(batch)
        return results
    finally:
        if local:
            pool.shutdown()


def aggregate(
    results: list[DropResult],
    macro_density_per_km2: float,
    metro_density_per_km2: float,
) -> NetworkMetrics:
    """Combine drop results into the area and per-user rate metrics.

    Conditional tier rates are averaged over the drops served by each tier;
    the area rate weighs them by sector density (three sectors per macro
    site).  A tier with no drops contributes a zero rate and a warning.
    """
    if not results:
        raise ValueError("aggregate needs at least one drop result")
    se = np.array([r.spectral_efficiency for r in results])
    is_metro = np.array([r.tier is Tier.METRO for r in results])
    n = len(results)
    n_metro = int(np.count_nonzero(is_metro))
    n_macro = n - n_metro
    for count, name in ((n_macro, "macro"), (n_metro, "metro")):
        if count == 0:
            warnings.warn(
                f"no {name}-associated drops; its conditional rate is reported as 0",
                RuntimeWarning,
                stacklevel=2,
            )

    rate_macro = float(se[~is_metro].mean()) if n_macro else 0.0
    rate_metro = float(se[is_metro].mean()) if n_metro else 0.0
    var_macro = float(se[~is_metro].var(ddof=1)) if n_macro >= 2 else 0.0
    var_metro = float(se[is_metro].var(ddof=1)) if n_metro >= 2 else 0.0

    macro_weight = 3.0 * macro_density_per_km2
    ase = macro_weight * rate_macro + metro_density_per_km2 * rate_metro
    ase_var = 0.0
    if n_macro:
        ase_var += macro_weight**2 * var_macro / n_macro
    if n_metro:
        ase_var += metro_density_per_km2**2 * var_metro / n_metro

    metro_fraction = n_metro / n
    avg_rate = rate_macro * (1.0 - metro_fraction) + rate_metro * metro_fraction
    rate_stderr = float(se.std(ddof=1) / math.sqrt(n)) if n >= 2 else 0.0

    return NetworkMetrics(
        ase_bps_hz_km2=float(ase),
        ase_stderr=float(math.sqrt(ase_var)),
        avg_rate_bps_hz=float(avg_rate),
        rate_stderr=rate_stderr,
        metro_fraction=float(metro_fraction),
        macro_rate_bps_hz=rate_macro,
        metro_rate_bps_hz=rate_metro,
        macro_drops=n_macro,
        metro_drops=n_metro,
    )


def cell_radius(
    height_m: float, user_height_m: float, downtilt_deg: float, vert_hpbw_deg: float
) -> float:
    """Ground radius of the outer half-power edge of a downtilted beam.

    Returns ``math.inf`` when the edge ray points at or above the horizon
    (downtilt no larger than half the beamwidth).
    """
    if height_m <= user_height_m:
        raise ValueError("antenna height must exceed the user height")
    if not 0.0 <= downtilt_deg < 90.0:
        raise ValueError("downtilt_deg must be in [0, 90)")
    if not 0.0 < vert_hpbw_deg < 180.0:
        raise ValueError("vert_hpbw_deg must be in (0, 180)")
    edge_deg = downtilt_deg - vert_hpbw_deg / 2.0
    if edge_deg <= 0.0:
        return math.inf
    return (height_m - user_height_m) / math.tan(math.radians(edge_deg))


def result_row(scenario: Scenario, metrics: NetworkMetrics) -> dict:
    """Flatten one scenario + metrics pair into an output table row."""
    ant = scenario.metro.antenna()
    if scenario.metro.height_m > scenario.user_height_m:
        radius = cell_radius(
            scenario.metro.height_m,
            scenario.user_height_m,
            scenario.metro.downtilt_deg,
            ant.pattern.vert_hpbw_deg,
        )
    else:
        radius = None  # beam-edge footprint undefined for a user at antenna level
    return {
        "pattern": scenario.metro.pattern,
        "downtilt_deg": scenario.metro.downtilt_deg,
        "power_mode": scenario.power_mode.value,
        "p2_dbm": scenario.metro.tx_power_dbm,
        "ase_bps_hz_km2": metrics.ase_bps_hz_km2,
        "ase_stderr": metrics.ase_stderr,
        "avg_rate_bps_hz": metrics.avg_rate_bps_hz,
        "rate_stderr": metrics.rate_stderr,
        "metro_fraction": metrics.metro_fraction,
        "cell_radius_m": radius,
        "drops": scenario.drops,
        "seed": scenario.master_seed,
    }


def sweep_scenarios(
    scenario: Scenario,
    downtilts_deg: list[float] | None = None,
    patterns: list[str] | None = None,
    power_mode: PowerMode | None = None,
) -> list[Scenario]:
    """The per-cell scenarios of a sweep, in pattern-major order.

    Every cell keeps the template's master seed; tilted cells of
    non-tiltable antennas are dropped from the grid.
    """
    tilts = scenario.sweep_downtilts_deg if downtilts_deg is None else downtilts_deg
    names = scenario.sweep_patterns if patterns is None else patterns
    mode = scenario.power_mode if power_mode is None else power_mode
    cells = []
    for name in names:
        antenna = metro_antenna(name)
        for tilt in tilts:
            if tilt != 0.0 and not antenna.tiltable:
                continue
            cells.append(
                replace(
                    scenario,
                    power_mode=mode,
                    metro=replace(
                        scenario.metro,
                        pattern=name,
                        downtilt_deg=float(tilt),
                        tx_power_dbm=metro_tx_power_dbm(
                            name, mode, scenario.metro.tx_power_dbm
                        ),
                    ),
                )
            )
    return cells


def run_sweep(
    scenario: Scenario,
    downtilts_deg: list[float] | None = None,
    patterns: list[str] | None = None,
    power_mode: PowerMode | None = None,
    *,
    workers: int = 1,
) -> list[dict]:
    """One metrics row per (pattern, downtilt) cell.

    Every cell reuses the scenario's master seed, so rows differ only in the
    swept parameter.
    """
    cells = sweep_scenarios(scenario, downtilts_deg, patterns, power_mode)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    rows: list[dict] = []
    try:
        for cell in cells:
            results = run_many(cell, workers=workers, executor=pool)
            metrics = aggregate(
                results, cell.macro.density_per_km2, cell.metro.density_per_km2
            )
            rows.append(result_row(cell, metrics))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows
