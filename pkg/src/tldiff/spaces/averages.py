"""Ball averages of first differences at nested dyadic radii.

This is the hot pass behind every difference seminorm: for a sampled
field g and radii t_m = t0 * 2^-m it produces the L^u averages

    I[x, m] = ( mean over unmasked y in B(x, t_m) of |g(x)-g(y)|^u )^(1/u)

(the supremum when u = inf; the y = x term contributes zero and is kept
in the count).  A compiled kernel is used when available; set
TLDIFF_PURE=1 to force the NumPy fallback.  TLDIFF_THREADS controls the
kernel's thread count (default: all cores); per-point results are
independent either way, so values are bit-stable for any thread count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .. import _ballfallback

if os.environ.get("TLDIFF_PURE", "").strip() not in ("", "0"):
    _kernel = _ballfallback
    BACKEND = "numpy"
else:
    try:
        from .. import _ballkern as _kernel
        BACKEND = "compiled"
    except ImportError:
        _kernel = _ballfallback
        BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND


def _num_threads() -> int:
    env = os.environ.get("TLDIFF_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _umode(u: float) -> tuple[int, float]:
    if u == np.inf:
        return 0, 1.0
    if u == 1.0:
        return 1, 1.0
    if u == 2.0:
        return 2, 2.0
    return 3, float(u)


def level_table(radius_units: float, nlev: int, dim: int) -> np.ndarray:
    """Annulus index of each lattice offset.

    Entry = largest m with t_m >= |offset| (offsets in lattice units,
    radius t_m = radius_units * 2^-m), or -1 outside the largest ball.
    """
    r = int(math.floor(radius_units * (1.0 + 1e-9)))
    ax = np.arange(-r, r + 1, dtype=float)
    if dim == 1:
        dist = np.abs(ax)
    else:
        dist = np.sqrt(ax[:, None] ** 2 + ax[None, :] ** 2)
    with np.errstate(divide="ignore"):
        lv = np.floor(np.log2(radius_units / dist) + 1e-9)
    lv = np.where(dist == 0.0, nlev - 1, lv)
    lv = np.where(dist > radius_units * (1.0 + 1e-9), -1.0, lv)
    lv = np.minimum(lv, nlev - 1)
    lv = np.where(lv < 0.0, -1.0, lv)
    return lv.astype(np.int32)


@dataclass
class BallDiffAverages:
    """I[x, m] profiles of a field, reusable across norm parameters."""

    radii: np.ndarray        # (nlev,) descending: t_m = t0 * 2^-m
    avg: np.ndarray          # (..., nlev)
    counts: np.ndarray       # (..., nlev)
    mask: np.ndarray
    u: float
    h: float

    @property
    def nlevels(self) -> int:
        return self.radii.size

    def restrict(self, t0: float) -> "BallDiffAverages":
        """View on the levels with t_m <= t0 (dyadic t0 reuses the pass)."""
        keep = self.radii <= t0 * (1.0 + 1e-9)
        if not keep.any():
            raise ValueError("no levels at or below the requested radius")
        return BallDiffAverages(self.radii[keep], self.avg[..., keep],
                                self.counts[..., keep], self.mask, self.u, self.h)


def ball_diff_averages(values: np.ndarray, mask: np.ndarray, h: float,
                       t0: float, nlev: int, u: float) -> BallDiffAverages:
    """Compute the L^u ball-difference averages of a sampled field.

    values: (n1[, n2], arity) float array; mask: matching bool array.
    """
    values = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim == 2 and mask.ndim == 2:
        values = values[:, :, None]
    mask8 = np.ascontiguousarray(np.asarray(mask, dtype=np.uint8))
    dim = mask8.ndim
    if nlev < 1:
        raise ValueError("need at least one level")
    radius_units = t0 / h
    lvl = level_table(radius_units, nlev, dim)
    r = (lvl.shape[0] - 1) // 2
    args = (values, mask8, lvl, r, int(nlev))
    umode, upow = _umode(float(u))
    nt = _num_threads()
    if dim == 1:
        S, C = _kernel.ball_sums_1d(*args, umode, upow, nt)
    elif dim == 2:
        S, C = _kernel.ball_sums_2d(*args, umode, upow, nt)
    else:
        raise ValueError("only 1D and 2D grids are supported")
    radii = t0 * 2.0 ** (-np.arange(nlev, dtype=float))
    maskb = mask8.astype(bool)
    if u == np.inf:
        avg = S
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            avg = np.where(C > 0, S / np.maximum(C, 1.0), 0.0) ** (1.0 / float(u))
    avg[~maskb] = 0.0
    return BallDiffAverages(radii, avg, C, maskb, float(u), float(h))
