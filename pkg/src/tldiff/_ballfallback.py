"""Pure NumPy implementation of the ball-difference sums.

Same contract as the compiled kernel in ``_ballkern``: per grid point
and per nested dyadic radius, the sum (or max) of powers of first
differences over the ball, plus the in-mask point counts.  The loop runs
over lattice offsets rather than point pairs; each offset and its
negation share one array pass, so the total floating-point work matches
the compiled kernel at much higher constant overhead.
"""

from __future__ import annotations

import numpy as np


def _weight(diff, umode, upow):
    if diff.shape[-1] == 1:
        w = np.abs(diff[..., 0])
    else:
        w = np.sqrt(np.sum(diff * diff, axis=-1))
    if umode == 2:
        return w * w
    if umode == 3:
        return w**upow
    return w  # umode 1 and 0 both start from |diff|


def _fold(S, C, mask, umode):
    """Annulus buffers -> ball totals, plus the y = x term."""
    if umode == 0:
        S[:] = np.maximum.accumulate(S[..., ::-1], axis=-1)[..., ::-1]
    else:
        S[:] = np.cumsum(S[..., ::-1], axis=-1)[..., ::-1]
    C[:] = np.cumsum(C[..., ::-1], axis=-1)[..., ::-1]
    C[mask.astype(bool)] += 1.0
    return S, C


def ball_sums_2d(vals, mask, lvl, radius, nlev, umode, upow=1.0, num_threads=1):
    vals = np.asarray(vals, dtype=np.float64)
    nx, ny, _ = vals.shape
    maskb = np.asarray(mask, dtype=bool)
    S = np.zeros((nx, ny, nlev))
    C = np.zeros((nx, ny, nlev))
    R = int(radius)
    for di in range(0, R + 1):
        djs = range(-R, R + 1) if di > 0 else range(1, R + 1)
        for dj in djs:
            m = int(lvl[di + R, dj + R])
            if m < 0:
                continue
            xi = slice(max(0, -di), nx - max(0, di))
            yi = slice(max(0, di), nx - max(0, -di))
            xj = slice(max(0, -dj), ny - max(0, dj))
            yj = slice(max(0, dj), ny - max(0, -dj))
            a = vals[xi, xj]
            b = vals[yi, yj]
            pm = maskb[xi, xj] & maskb[yi, yj]
            w = _weight(a - b, umode, upow) * pm
            if umode == 0:
                S[xi, xj, m] = np.maximum(S[xi, xj, m], w)
                S[yi, yj, m] = np.maximum(S[yi, yj, m], w)
            else:
                S[xi, xj, m] += w
                S[yi, yj, m] += w
            C[xi, xj, m] += pm
            C[yi, yj, m] += pm
    S, C = _fold(S, C, maskb, umode)
    S[~maskb] = 0.0
    C[~maskb] = 0.0
    return S, C


def ball_sums_1d(vals, mask, lvl, radius, nlev, umode, upow=1.0, num_threads=1):
    vals = np.asarray(vals, dtype=np.float64)
    nx, _ = vals.shape
    maskb = np.asarray(mask, dtype=bool)
    S = np.zeros((nx, nlev))
    C = np.zeros((nx, nlev))
    R = int(radius)
    for di in range(1, R + 1):
        m = int(lvl[di + R])
        if m < 0:
            continue
        xi = slice(0, nx - di)
        yi = slice(di, nx)
        pm = maskb[xi] & maskb[yi]
        w = _weight(vals[xi] - vals[yi], umode, upow) * pm
        if umode == 0:
            S[xi, m] = np.maximum(S[xi, m], w)
            S[yi, m] = np.maximum(S[yi, m], w)
        else:
            S[xi, m] += w
            S[yi, m] += w
        C[xi, m] += pm
        C[yi, m] += pm
    S, C = _fold(S, C, maskb, umode)
    S[~maskb] = 0.0
    C[~maskb] = 0.0
    return S, C
