"""Discretized norms: Lebesgue, Sobolev, Hoelder, and the difference norm.

The difference seminorm discretizes the quadruple integral as

  * outer Riemann sum over present grid points (weight h^d),
  * dyadic t-levels t_m = rho * 2^-m with weight ln 2 for dt/t,
    stopping at t_m >= 4h (smaller balls hold too few samples),
  * per-level L^u ball averages of |g(x) - g(y)| over present points
    (normalized counting average; the y = x term contributes zero and
    stays in the count), with the exact maximum when u or q is inf,
  * division by t^sigma inside the level aggregation.

Note the y-average runs over the points where the derivative field is
defined, i.e. the stencil-valid part of the domain; no values are
extrapolated to make balls rounder.
"""

from __future__ import annotations

import math

import numpy as np

from ..calculus.fd import finite_diff
from ..errors import CoverageError, DegenerateInputError, ResolutionError
from ..grid import SampledFunction, require_present
from .averages import BallDiffAverages, ball_diff_averages
from .normspec import NormSpec

LN2 = math.log(2.0)


def _pointwise_magnitude(values: np.ndarray) -> np.ndarray:
    if values.shape[-1] == 1:
        return np.abs(values[..., 0])
    return np.sqrt(np.sum(values * values, axis=-1))


def lp_norm(f: SampledFunction, p: float) -> float:
    """Riemann-sum L^p norm; p = inf gives the max of |f|."""
    require_present(f)
    mag = _pointwise_magnitude(f.present_values())
    if p == math.inf:
        return float(mag.max())
    if p < 1:
        raise ValueError("p must be >= 1")
    return float((np.sum(mag**p) * f.h**f.dim) ** (1.0 / p))


def sup_norm(f: SampledFunction) -> float:
    return lp_norm(f, math.inf)


def wkp_norm(f: SampledFunction, k: int, p: float) -> float:
    """Sum over derivative orders j <= k of the L^p norms of grad^j f."""
    total = 0.0
    for j in range(k + 1):
        total += lp_norm(finite_diff(f, j), p)
    return float(total)


def holder_seminorm(f: SampledFunction, s: float, seed: int = 0,
                    exhaustive_limit: int = 10_000) -> float:
    """sup over sampled point pairs of |grad^k f(x) - grad^k f(y)| / |x-y|^sigma.

    Exhaustive over the present points when there are at most
    exhaustive_limit of them; above that, a seeded random subset of that
    size is compared exhaustively.
    """
    if s <= 0 or float(s).is_integer():
        raise ValueError("Hoelder exponent must be positive and non-integer")
    k = int(math.floor(s))
    sigma = s - k
    field = finite_diff(f, k)
    pts = field.present_points()
    vals = field.present_values()
    n = pts.shape[0]
    if n < 2:
        raise DegenerateInputError("Hoelder seminorm needs at least two present points")
    if n > exhaustive_limit:
        rng = np.random.default_rng(seed)
        keep = rng.choice(n, size=exhaustive_limit, replace=False)
        keep.sort()
        pts, vals = pts[keep], vals[keep]
        n = exhaustive_limit
    best = 0.0
    block = max(1, 2_000_000 // max(n, 1))
    for start in range(0, n, block):
        stop = min(n, start + block)
        diff = vals[start:stop, None, :] - vals[None, :, :]
        num = _pointwise_magnitude(diff)
        dist = np.sqrt(((pts[start:stop, None, :] - pts[None, :, :]) ** 2).sum(-1))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, num / dist**sigma, 0.0)
        best = max(best, float(ratio.max()))
    return best


def holder_norm(f: SampledFunction, s: float, seed: int = 0) -> float:
    """sup |f| plus the Hoelder seminorm of the k-th derivative field."""
    return sup_norm(f) + holder_seminorm(f, s, seed=seed)


# difference seminorm -------------------------------------------------------

def n_levels(h: float, rho: float) -> int:
    """Dyadic t-levels with t_m = rho 2^-m >= 4h."""
    if rho < 8.0 * h:
        raise ResolutionError(
            f"grid spacing {h} too coarse for truncation radius {rho}: "
            "fewer than two t-levels"
        )
    return int(math.floor(math.log2(rho / (4.0 * h)) + 1e-9)) + 1


def difference_profile(gradk: SampledFunction, u: float, rho: float = 1.0,
                       nlev: int | None = None) -> BallDiffAverages:
    """Ball-average profile of a derivative field, reusable across specs."""
    if nlev is None:
        nlev = n_levels(gradk.h, rho)
    return ball_diff_averages(gradk.values, gradk.mask, gradk.h, rho, nlev, u)


def tl_seminorm_from_profile(profile: BallDiffAverages, spec: NormSpec) -> float:
    prof = profile.restrict(spec.rho)
    if prof.nlevels < 2:
        raise ResolutionError("need at least two t-levels inside rho")
    I = prof.avg[prof.mask]                      # (npts, nlev)
    scaled = I / prof.radii**spec.sigma
    if spec.q == math.inf:
        J = scaled.max(axis=-1)
    else:
        J = (LN2 * np.sum(scaled**spec.q, axis=-1)) ** (1.0 / spec.q)
    return float((np.sum(J**spec.p) * prof.h ** prof.mask.ndim) ** (1.0 / spec.p))


def tl_seminorm(gradk: SampledFunction, spec: NormSpec) -> float:
    """Difference seminorm of an order-k derivative field."""
    spec.validate_for_dim(gradk.dim)
    require_present(gradk, 2)
    profile = difference_profile(gradk, spec.u, spec.rho)
    return tl_seminorm_from_profile(profile, spec)


def tl_norm_split(f: SampledFunction, spec: NormSpec) -> tuple[float, float, float]:
    """(total, sobolev part, seminorm part) of the difference norm."""
    spec.validate_for_dim(f.dim)
    sobolev = wkp_norm(f, spec.k, spec.p)
    semi = tl_seminorm(finite_diff(f, spec.k), spec)
    return sobolev + semi, sobolev, semi


def tl_norm(f: SampledFunction, spec: NormSpec) -> float:
    return tl_norm_split(f, spec)[0]


# composition ----------------------------------------------------------------

def resample_through_map(g: SampledFunction, fmap, domain=None,
                         h: float | None = None) -> SampledFunction:
    """Pull back g through a map: samples of g o f on the source domain.

    g is interpolated multilinearly at f(x); grid points whose image
    lacks interpolation support are absent in the result.
    """
    dom = domain if domain is not None else fmap.source_domain
    if dom is None:
        raise ValueError("resampling needs a source domain")
    step = h if h is not None else g.h
    out = SampledFunction.sample(dom, step, lambda p: np.zeros((p.shape[0], g.arity)))
    pts = out.points().reshape(-1, dom.dim)
    images = fmap.forward(pts)
    vals, valid = g.interpolate(images)
    mask = out.mask & valid.reshape(out.shape)
    if not mask.any():
        raise CoverageError("no source grid point maps into the sample support")
    vals = vals.reshape(out.shape + (g.arity,))
    return SampledFunction(np.where(mask[..., None], vals, 0.0), mask,
                           out.h, out.origin, dom)
