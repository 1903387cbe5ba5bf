"""Bounded planar and interval domains described by their boundary.

Every built-in domain is polygonal: the boundary is a finite set of
segments (degenerate points in 1D), membership is an exact coordinate
formula, and distances from axis-aligned boxes to the boundary are
computed exactly (up to a convex 1D minimization solved to ~1e-14).

Custom shapes come in through a sampled signed-distance grid; there the
classification follows the stencil rule: a box counts as interior when
its 3^d-point stencil is strictly positive.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidDomainError


def _boxes_to_segment_distance(blo, bhi, p0, p1):
    """Distance from each axis-aligned box to the segment [p0, p1].

    dist^2 along the segment parameter is convex (a sum of squared
    hinge functions of affine arguments), so a ternary search converges
    to the global minimum.
    """
    blo = np.atleast_2d(blo)
    bhi = np.atleast_2d(bhi)
    c = 0.5 * (blo + bhi)
    r = 0.5 * (bhi - blo)
    p0 = np.asarray(p0, dtype=float)
    v = np.asarray(p1, dtype=float) - p0

    def dist2(t):
        x = p0 + t[:, None] * v
        g = np.maximum(np.abs(x - c) - r, 0.0)
        return np.sum(g * g, axis=1)

    n = blo.shape[0]
    ta = np.zeros(n)
    tb = np.ones(n)
    if np.allclose(v, 0.0):
        return np.sqrt(dist2(ta))
    for _ in range(96):
        t1 = ta + (tb - ta) / 3.0
        t2 = tb - (tb - ta) / 3.0
        left = dist2(t1) < dist2(t2)
        tb = np.where(left, t2, tb)
        ta = np.where(left, ta, t1)
    return np.sqrt(dist2(0.5 * (ta + tb)))


class Domain:
    """A bounded open set with a deterministic membership test.

    Subclasses provide `contains`, `in_closure` and the boundary
    segments used for distance queries.  `segments` carries the full
    boundary; `outer_segments` drops measure-zero pieces (slits) and is
    what the exterior Whitney covering measures distances against.
    """

    def __init__(self, name, lo, hi, segments, outer_segments=None, delta=None):
        self.name = name
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        self.dim = self.lo.size
        self.segments = [(np.asarray(a, float), np.asarray(b, float)) for a, b in segments]
        self.outer_segments = (
            self.segments if outer_segments is None
            else [(np.asarray(a, float), np.asarray(b, float)) for a, b in outer_segments]
        )
        self.corkscrew_delta = float(delta) if delta is not None else float(np.min(self.hi - self.lo)) / 2.0

    # membership -------------------------------------------------------
    def contains(self, pts) -> np.ndarray:
        raise NotImplementedError

    def in_closure(self, pts) -> np.ndarray:
        raise NotImplementedError

    # boundary queries --------------------------------------------------
    def boundary_distance_boxes(self, blo, bhi, outer: bool = False) -> np.ndarray:
        """Distance from each box [blo_i, bhi_i] to the boundary."""
        segs = self.outer_segments if outer else self.segments
        blo = np.atleast_2d(np.asarray(blo, dtype=float))
        bhi = np.atleast_2d(np.asarray(bhi, dtype=float))
        best = np.full(blo.shape[0], np.inf)
        for p0, p1 in segs:
            best = np.minimum(best, _boxes_to_segment_distance(blo, bhi, p0, p1))
        return best

    def boundary_distance_points(self, pts, outer: bool = False) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.boundary_distance_boxes(pts, pts, outer=outer)

    def boundary_points(self, n_per_segment: int = 16) -> np.ndarray:
        """Sample points on the boundary, a few per segment."""
        out = []
        for p0, p1 in self.segments:
            if np.allclose(p0, p1):
                out.append(p0[None, :])
                continue
            t = np.linspace(0.0, 1.0, n_per_segment)
            out.append(p0[None, :] + t[:, None] * (p1 - p0)[None, :])
        return np.unique(np.concatenate(out, axis=0), axis=0)

    def validate(self, probe: int = 64):
        """Raise when the probe grid finds no interior point."""
        axes = [np.linspace(a, b, probe) for a, b in zip(self.lo, self.hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        if not self.contains(grid).any():
            raise InvalidDomainError(f"domain {self.name!r} has empty interior at probe resolution")
        return self

    def __repr__(self):
        return f"Domain({self.name!r}, d={self.dim})"


class _FormulaDomain(Domain):
    """Domain whose membership is a closed-form predicate."""

    def __init__(self, name, lo, hi, segments, inside, closure, outer_segments=None, delta=None):
        super().__init__(name, lo, hi, segments, outer_segments, delta)
        self._inside = inside
        self._closure = closure

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self._inside(pts)

    def in_closure(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self._closure(pts)


def interval(a: float = 0.0, b: float = 1.0) -> Domain:
    if not b > a:
        raise InvalidDomainError("interval requires b > a")
    segs = [((a,), (a,)), ((b,), (b,))]
    return _FormulaDomain(
        "interval", (a,), (b,), segs,
        inside=lambda p: (p[:, 0] > a) & (p[:, 0] < b),
        closure=lambda p: (p[:, 0] >= a) & (p[:, 0] <= b),
    )


def box(lo=(0.0, 0.0), hi=(1.0, 1.0), name: str = "square") -> Domain:
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    if lo.size == 1:
        return interval(float(lo[0]), float(hi[0]))
    if not np.all(hi > lo):
        raise InvalidDomainError("box requires hi > lo componentwise")
    (x0, y0), (x1, y1) = lo, hi
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    segs = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    return _FormulaDomain(
        name, lo, hi, segs,
        inside=lambda p: np.all((p > lo) & (p < hi), axis=1),
        closure=lambda p: np.all((p >= lo) & (p <= hi), axis=1),
    )


def square() -> Domain:
    return box((0.0, 0.0), (1.0, 1.0), name="square")


def l_shape() -> Domain:
    """Unit square minus the closed top-right quadrant."""
    pts = [(0, 0), (1, 0), (1, 0.5), (0.5, 0.5), (0.5, 1), (0, 1)]
    pts = [np.asarray(p, float) for p in pts]
    segs = [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def inside(p):
        in_sq = np.all((p > 0.0) & (p < 1.0), axis=1)
        cut = (p[:, 0] >= 0.5) & (p[:, 1] >= 0.5)
        return in_sq & ~cut

    def closure(p):
        in_sq = np.all((p >= 0.0) & (p <= 1.0), axis=1)
        cut = (p[:, 0] > 0.5) & (p[:, 1] > 0.5)
        return in_sq & ~cut

    return _FormulaDomain("l-shape", (0, 0), (1, 1), segs, inside, closure)


def disc(n_sides: int = 16, radius: float = 0.45, center=(0.5, 0.5)) -> Domain:
    """Polygonal approximation of a disc (regular n-gon, CCW)."""
    cx, cy = center
    ang = 2.0 * np.pi * np.arange(n_sides) / n_sides
    verts = np.stack([cx + radius * np.cos(ang), cy + radius * np.sin(ang)], axis=1)
    segs = [(verts[i], verts[(i + 1) % n_sides]) for i in range(n_sides)]
    edges = np.roll(verts, -1, axis=0) - verts

    def _side(p, strict):
        rel = p[:, None, :] - verts[None, :, :]
        cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
        return np.all(cross > 0.0, axis=1) if strict else np.all(cross >= 0.0, axis=1)

    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    return _FormulaDomain(
        "disc", lo, hi, segs,
        inside=lambda p: _side(p, True),
        closure=lambda p: _side(p, False),
        delta=radius / 2.0,
    )


def slit_square(depth: float = 0.5) -> Domain:
    """Unit square with the vertical segment x = 1/2, 0 <= y <= depth removed.

    The slit belongs to the interior boundary but not to the boundary of
    the closure's complement, so the exterior covering ignores it.
    """
    if not 0.0 < depth < 1.0:
        raise InvalidDomainError("slit depth must be in (0, 1)")
    sq = square()
    segs = list(sq.segments) + [((0.5, 0.0), (0.5, depth))]

    def inside(p):
        in_sq = np.all((p > 0.0) & (p < 1.0), axis=1)
        on_slit = (p[:, 0] == 0.5) & (p[:, 1] <= depth)
        return in_sq & ~on_slit

    def closure(p):
        return np.all((p >= 0.0) & (p <= 1.0), axis=1)

    return _FormulaDomain(
        "slit-square", (0, 0), (1, 1), segs, inside, closure,
        outer_segments=list(sq.segments),
    )


class SdfDomain(Domain):
    """Domain given by signed-distance samples on a uniform grid.

    Positive values are inside.  Membership interpolates bilinearly;
    box-to-boundary distances use the minimum of the sampled stencil,
    which is only first-order accurate but deterministic.
    """

    def __init__(self, values: np.ndarray, lo, hi, name: str = "sdf"):
        values = np.asarray(values, dtype=float)
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        dim = values.ndim
        segs = []  # distances are grid-based, no explicit segments
        super().__init__(name, lo, hi, segs)
        self.values = values
        self.shape = values.shape
        self.spacing = (hi - lo) / (np.asarray(self.shape, dtype=float) - 1.0)
        self.dim = dim

    def _interp(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        u = (pts - self.lo) / self.spacing
        u = np.clip(u, 0.0, np.asarray(self.shape, dtype=float) - 1.0)
        i0 = np.floor(u).astype(int)
        i0 = np.minimum(i0, np.asarray(self.shape) - 2)
        f = u - i0
        if self.dim == 1:
            v0 = self.values[i0[:, 0]]
            v1 = self.values[i0[:, 0] + 1]
            return v0 * (1 - f[:, 0]) + v1 * f[:, 0]
        v00 = self.values[i0[:, 0], i0[:, 1]]
        v10 = self.values[i0[:, 0] + 1, i0[:, 1]]
        v01 = self.values[i0[:, 0], i0[:, 1] + 1]
        v11 = self.values[i0[:, 0] + 1, i0[:, 1] + 1]
        fx, fy = f[:, 0], f[:, 1]
        return (v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy)
                + v01 * (1 - fx) * fy + v11 * fx * fy)

    def contains(self, pts):
        return self._interp(pts) > 0.0

    def in_closure(self, pts):
        return self._interp(pts) >= 0.0

    def _stencil(self, blo, bhi):
        blo = np.atleast_2d(np.asarray(blo, dtype=float))
        bhi = np.atleast_2d(np.asarray(bhi, dtype=float))
        offs = np.stack(np.meshgrid(*([np.array([0.0, 0.5, 1.0])] * self.dim),
                                    indexing="ij"), axis=-1).reshape(-1, self.dim)
        pts = blo[:, None, :] + offs[None, :, :] * (bhi - blo)[:, None, :]
        vals = self._interp(pts.reshape(-1, self.dim)).reshape(blo.shape[0], -1)
        return vals

    def boundary_distance_boxes(self, blo, bhi, outer: bool = False):
        vals = self._stencil(blo, bhi)
        signed = -vals if outer else vals
        return np.maximum(signed.min(axis=1), 0.0)

    def boundary_distance_points(self, pts, outer: bool = False):
        v = self._interp(pts)
        return np.maximum(-v if outer else v, 0.0)

    def boundary_points(self, n_per_segment: int = 16):
        # approximate: grid points with small |sdf|
        axes = [np.linspace(a, b, s) for a, b, s in zip(self.lo, self.hi, self.shape)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        v = np.abs(self._interp(grid))
        keep = v <= 1.5 * float(np.max(self.spacing))
        return grid[keep]

    @classmethod
    def from_function(cls, fn, lo, hi, n: int = 129, name: str = "sdf"):
        axes = [np.linspace(a, b, n) for a, b in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        vals = fn(grid.reshape(-1, len(lo))).reshape(grid.shape[:-1])
        return cls(vals, lo, hi, name=name)


_BUILTINS = {
    "interval": interval,
    "square": square,
    "l-shape": l_shape,
    "lshape": l_shape,
    "disc": disc,
    "slit-square": slit_square,
    "slit": slit_square,
}


def domain_from_name(name: str) -> Domain:
    try:
        return _BUILTINS[name]().validate()
    except KeyError:
        raise InvalidDomainError(
            f"unknown domain {name!r}; built-ins: {sorted(set(_BUILTINS))}"
        ) from None
