"""User association: best sector per tier, then a biased cross-tier choice.

A user first identifies the strongest macro sector and the strongest metro
cell by fading-averaged signal power, then compares their ASAIR (ratio of
the candidate's mean power to the summed mean power of every other sector)
and prefers the metro cell whenever its ASAIR is within ``bias_db`` of the
macro one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import PathLossModel, mean_rx_power_dbm
from .geometry import Building, Tier, Wap

__all__ = [
    "AssociationDecision",
    "DegenerateNetworkError",
    "asair_db",
    "associate",
    "sector_power_table",
    "step3_prefers_metro",
]


class DegenerateNetworkError(RuntimeError):
    """The network realization cannot support an association decision."""


@dataclass(frozen=True)
class AssociationDecision:
    tier: Tier
    wap_index: int  # index into the waps list given to associate()
    sector_index: int  # 0 for metro
    serving_asair_db: float


def sector_power_table(
    waps: list[Wap],
    user_xy: tuple[float, float],
    user_height_m: float,
    buildings: list[Building],
    pathloss_by_tier: dict[Tier, PathLossModel],
    attenuation_db: float,
) -> list[tuple[int, int, float]]:
    """Mean receive power of every sector: (wap_index, sector_index, dBm)."""
    table = []
    for i, wap in enumerate(waps):
        model = pathloss_by_tier[wap.tier]
        for j, sector in enumerate(wap.sectors):
            dbm = mean_rx_power_dbm(
                wap, sector, user_xy, user_height_m, buildings, model, attenuation_db
            )
            table.append((i, j, dbm))
    return table


def _asair_from_table(table: list[tuple[int, int, float]], wap_index: int, sector_index: int) -> float:
    linear = np.array([10.0 ** (dbm / 10.0) for _, _, dbm in table])
    desired = None
    for k, (i, j, _) in enumerate(table):
        if i == wap_index and j == sector_index:
            desired = k
            break
    if desired is None:
        raise ValueError(f"no sector ({wap_index}, {sector_index}) in the table")
    interference = linear.sum() - linear[desired]
    if interference <= 0.0:
        raise DegenerateNetworkError("candidate sector has no interferers")
    return float(10.0 * np.log10(linear[desired] / interference))


def asair_db(
    candidate: tuple[int, int],
    waps: list[Wap],
    user_xy: tuple[float, float],
    user_height_m: float,
    buildings: list[Building],
    pathloss_by_tier: dict[Tier, PathLossModel],
    attenuation_db: float,
) -> float:
    """Mean-signal to summed-mean-interference ratio of one candidate sector.

    Every sector of every WAP other than the candidate itself interferes,
    including the candidate WAP's own remaining sectors.
    """
    table = sector_power_table(
        waps, user_xy, user_height_m, buildings, pathloss_by_tier, attenuation_db
    )
    return _asair_from_table(table, candidate[0], candidate[1])


def step3_prefers_metro(asair_macro_db: float, asair_metro_db: float, bias_db: float) -> bool:
    """Cross-tier rule: metro wins when within ``bias_db`` of the macro ASAIR."""
    return asair_metro_db >= asair_macro_db - bias_db


def _best_of_tier(
    table: list[tuple[int, int, float]], waps: list[Wap], tier: Tier
) -> tuple[int, int] | None:
    best = None
    best_dbm = -np.inf
    for i, j, dbm in table:
        if waps[i].tier is tier and dbm > best_dbm:
            best = (i, j)
            best_dbm = dbm
    return best


def associate(
    waps: list[Wap],
    user_xy: tuple[float, float],
    user_height_m: float,
    buildings: list[Building],
    bias_db: float,
    pathloss_by_tier: dict[Tier, PathLossModel],
    attenuation_db: float,
) -> AssociationDecision:
    """Pick the serving sector for a user.

    Step 1 takes the strongest macro sector by mean power, step 2 the
    strongest metro cell, step 3 compares their ASAIRs with the bias.  Ties
    go to the lowest WAP index, then the lowest sector index.  A missing
    tier skips the bias comparison.
    """
    if not waps:
        raise DegenerateNetworkError("no WAPs in the network")
    table = sector_power_table(
        waps, user_xy, user_height_m, buildings, pathloss_by_tier, attenuation_db
    )
    macro_best = _best_of_tier(table, waps, Tier.MACRO)
    metro_best = _best_of_tier(table, waps, Tier.METRO)

    if macro_best is None and metro_best is None:
        raise DegenerateNetworkError("no WAPs in the network")
    if macro_best is None:
        choice, tier = metro_best, Tier.METRO
    elif metro_best is None:
        choice, tier = macro_best, Tier.MACRO
    else:
        asair_macro = _asair_from_table(table, *macro_best)
        asair_metro = _asair_from_table(table, *metro_best)
        if step3_prefers_metro(asair_macro, asair_metro, bias_db):
            choice, tier = metro_best, Tier.METRO
        else:
            choice, tier = macro_best, Tier.MACRO
    return AssociationDecision(
        tier=tier,
        wap_index=choice[0],
        sector_index=choice[1],
        serving_asair_db=_asair_from_table(table, *choice),
    )
