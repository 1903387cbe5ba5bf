"""Centered finite differences and first differences on sampled grids.

All stencils are second-order centered; points whose stencil leaves the
present set are dropped from the output mask rather than patched with
one-sided formulas, so derivative fields shrink toward the boundary and
absence propagates honestly.
"""

from __future__ import annotations

import numpy as np

from ..errors import CapabilityError, ResolutionError
from ..grid import SampledFunction
from .multiindex import _as_tuple, multiindices

# one-dimensional centered stencils, second-order accurate
_STENCILS = {
    0: ((0,), (1.0,)),
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}
MAX_FD_ORDER = 4


def _shift(arr, offset, axis, fill):
    out = np.full_like(arr, fill)
    n = arr.shape[axis]
    if abs(offset) >= n:
        return out
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    if offset >= 0:
        src[axis] = slice(offset, n)
        dst[axis] = slice(0, n - offset)
    else:
        src[axis] = slice(0, n + offset)
        dst[axis] = slice(-offset, n)
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _apply_axis_stencil(values, order, axis, h):
    offsets, coeffs = _STENCILS[order]
    out = np.zeros_like(values)
    for off, c in zip(offsets, coeffs):
        out += c * _shift(values, off, axis, np.nan)
    return out / h**order


def partial_derivative(samples: SampledFunction, alpha) -> SampledFunction:
    """Single mixed partial D^alpha via tensor-product centered stencils."""
    alpha = _as_tuple(alpha)
    if len(alpha) != samples.dim:
        raise ValueError("multiindex dimension mismatch")
    if max(alpha, default=0) > MAX_FD_ORDER or sum(alpha) > MAX_FD_ORDER:
        raise CapabilityError(f"finite differences support order <= {MAX_FD_ORDER}")
    vals = np.where(samples.mask[..., None], samples.values, np.nan)
    for axis, a in enumerate(alpha):
        if a:
            vals = _apply_axis_stencil(vals, a, axis, samples.h)
    mask = np.all(np.isfinite(vals), axis=-1)
    if not mask.any():
        raise ResolutionError(
            f"no grid point supports the full stencil of D^{alpha}"
        )
    return SampledFunction(np.where(mask[..., None], vals, 0.0), mask,
                           samples.h, samples.origin, samples.domain)


def finite_diff(samples: SampledFunction, order: int) -> SampledFunction:
    """Full derivative field of a given order.

    The output arity is (#multiindices of that order) x (input arity),
    blocks ordered like the multiindex enumeration: in 2D,
    (k,0), (k-1,1), ..., (0,k).
    """
    if order == 0:
        return samples
    alphas = multiindices(samples.dim, order)
    parts = [partial_derivative(samples, a) for a in alphas]
    mask = parts[0].mask.copy()
    for p in parts[1:]:
        mask &= p.mask
    vals = np.concatenate([p.values for p in parts], axis=-1)
    return SampledFunction(np.where(mask[..., None], vals, 0.0), mask,
                           samples.h, samples.origin, samples.domain)


def delta_h(samples: SampledFunction, offset) -> SampledFunction:
    """First difference g(x + h) - g(x).

    Lattice-aligned offsets shift exactly; other offsets interpolate
    multilinearly (exact on affine data).  Points where x + h leaves the
    present set are masked out, never extrapolated.
    """
    offset = np.asarray(offset, dtype=float).reshape(-1)
    if offset.size != samples.dim:
        raise ValueError("offset dimension mismatch")
    steps = offset / samples.h
    rounded = np.round(steps)
    if np.all(np.abs(steps - rounded) < 1e-9):
        vals = np.where(samples.mask[..., None], samples.values, np.nan)
        shifted = vals
        mask_sh = samples.mask.astype(float)
        for axis, s in enumerate(rounded.astype(int)):
            if s:
                shifted = _shift(shifted, s, axis, np.nan)
        diff = shifted - vals
        mask = np.all(np.isfinite(diff), axis=-1)
        return SampledFunction(np.where(mask[..., None], diff, 0.0), mask,
                               samples.h, samples.origin, samples.domain)
    pts = samples.points().reshape(-1, samples.dim)
    shifted_vals, valid = samples.interpolate(pts + offset)
    diff = shifted_vals.reshape(samples.values.shape) - samples.values
    mask = samples.mask & valid.reshape(samples.shape)
    return SampledFunction(np.where(mask[..., None], diff, 0.0), mask,
                           samples.h, samples.origin, samples.domain)
