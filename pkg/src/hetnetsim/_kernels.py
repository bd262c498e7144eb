"""Optional numba fast path for origin-anchored blockage counting.

Mirrors the numpy implementation in `geometry` operation for operation; the
two are interchangeable and an equivalence test keeps them in lock step.
Importing this module never fails: ``origin_blockage_counts`` is None when
numba is unavailable.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    njit = None

origin_blockage_counts = None

if njit is not None:

    @njit(cache=True)
    def _origin_blockage_counts_jit(wap_xy, wap_z_m, user_z_m, e1, e2, wall_h_m):
        n_w = wap_xy.shape[0]
        n_b = e1.shape[0]
        counts = np.zeros(n_w, dtype=np.int64)
        if n_w == 0 or n_b == 0:
            return counts
        two_pi = 2.0 * math.pi

        alpha = np.empty(n_w)
        for i in range(n_w):
            alpha[i] = math.atan2(wap_xy[i, 1], wap_xy[i, 0])
        order = np.argsort(alpha)
        alpha_sorted = alpha[order]

        for b in range(n_b):
            e1x = e1[b, 0]
            e1y = e1[b, 1]
            e2x = e2[b, 0]
            e2y = e2[b, 1]
            vx = e2x - e1x
            vy = e2y - e1y
            h = wall_h_m[b]

            # Walls running (numerically) through the origin subtend no
            # usable bearing interval; test them against every path.
            seg2 = vx * vx + vy * vy
            s = -(e1x * vx + e1y * vy) / seg2
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
            nx = e1x + s * vx
            ny = e1y + s * vy
            if nx * nx + ny * ny < 1e-24:
                for w in range(n_w):
                    counts[w] += _cuts_path(
                        wap_xy[w, 0], wap_xy[w, 1], wap_z_m[w], user_z_m,
                        e1x, e1y, e2x, e2y, vx, vy, h,
                    )
                continue

            psi1 = math.atan2(e1y, e1x)
            psi2 = math.atan2(e2y, e2x)
            spread = psi2 - psi1
            spread -= two_pi * math.floor((spread + math.pi) / two_pi)  # [-pi, pi)
            half_width = 0.5 * abs(spread) + 1e-9
            lo = psi1 + 0.5 * spread - half_width
            lo -= two_pi * math.floor((lo + math.pi) / two_pi)  # [-pi, pi)
            hi = lo + 2.0 * half_width

            # leftmost sorted bearing >= lo
            i0 = 0
            i1 = n_w
            while i0 < i1:
                mid = (i0 + i1) // 2
                if alpha_sorted[mid] < lo:
                    i0 = mid + 1
                else:
                    i1 = mid

            i = i0
            while i < n_w and alpha_sorted[i] <= hi:
                w = order[i]
                counts[w] += _cuts_path(
                    wap_xy[w, 0], wap_xy[w, 1], wap_z_m[w], user_z_m,
                    e1x, e1y, e2x, e2y, vx, vy, h,
                )
                i += 1
            if i == n_w:  # window wraps past +pi
                j = 0
                while j < i0 and alpha_sorted[j] + two_pi <= hi:
                    w = order[j]
                    counts[w] += _cuts_path(
                        wap_xy[w, 0], wap_xy[w, 1], wap_z_m[w], user_z_m,
                        e1x, e1y, e2x, e2y, vx, vy, h,
                    )
                    j += 1
        return counts

    @njit(cache=True, inline="always")
    def _cuts_path(bx, by, zb, za, e1x, e1y, e2x, e2y, vx, vy, h):
        """Scalar twin of geometry._crossing_mask for a path from the origin."""
        c1 = bx * (e1y - 0.0) - by * (e1x - 0.0)
        c2 = bx * (e2y - 0.0) - by * (e2x - 0.0)
        if c1 * c2 > 0.0:
            return 0
        c3 = vx * (0.0 - e1y) - vy * (0.0 - e1x)
        c4 = vx * (by - e1y) - vy * (bx - e1x)
        if c3 * c4 > 0.0:
            return 0
        denom = c3 - c4
        if denom != 0.0:
            t = c3 / denom
            z = za + t * (zb - za)
            return 1 if z <= h else 0
        if c1 != 0.0 or c2 != 0.0:
            return 0
        # collinear overlap, judged at the overlap midpoint
        r2 = bx * bx + by * by
        if r2 == 0.0:
            return 0
        s1 = (e1x * bx + e1y * by) / r2
        s2 = (e2x * bx + e2y * by) / r2
        lo = min(s1, s2)
        hi = max(s1, s2)
        if lo < 0.0:
            lo = 0.0
        if hi > 1.0:
            hi = 1.0
        if lo > hi:
            return 0
        z_mid = za + 0.5 * (lo + hi) * (zb - za)
        return 1 if z_mid <= h else 0

    origin_blockage_counts = _origin_blockage_counts_jit
