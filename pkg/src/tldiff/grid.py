"""Uniform-grid sampled functions on a domain.

Values live on the node lattice origin + i*h and are present exactly at
points the domain classifies as interior; everything else is masked.
Vector values are stored in a trailing arity axis.  The file format is
one JSON document: a small header plus base64-encoded row-major value
and mask blocks.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, DegenerateInputError
from .geometry.domains import Domain, domain_from_name


@dataclass
class SampledFunction:
    values: np.ndarray          # shape + (arity,)
    mask: np.ndarray            # bool, shape
    h: float
    origin: np.ndarray
    domain: Domain | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.values.ndim == self.mask.ndim:
            self.values = self.values[..., None]
        if self.values.shape[:-1] != self.mask.shape:
            raise ValueError("values and mask shapes disagree")
        self.origin = np.asarray(self.origin, dtype=float)
        self.values = np.where(self.mask[..., None], self.values, 0.0)

    # basic geometry -----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.mask.ndim

    @property
    def arity(self) -> int:
        return self.values.shape[-1]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.mask.shape

    def axes(self) -> list[np.ndarray]:
        return [self.origin[i] + self.h * np.arange(n) for i, n in enumerate(self.shape)]

    def points(self) -> np.ndarray:
        """All grid points, shape (*grid_shape, dim)."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def present_points(self) -> np.ndarray:
        return self.points()[self.mask]

    def present_values(self) -> np.ndarray:
        return self.values[self.mask]

    def n_present(self) -> int:
        return int(self.mask.sum())

    # constructors ---------------------------------------------------------
    @classmethod
    def sample(cls, domain: Domain, h: float, fn, arity: int | None = None,
               pad: float = 0.0) -> "SampledFunction":
        """Sample a callable on the node lattice of the domain's box.

        fn maps an (n, d) point array to (n,) or (n, arity) values.  pad
        extends the lattice beyond the bounding box by a multiple of h
        on each side (used by extension operators).
        """
        steps = int(round(pad / h))
        origin = domain.lo - steps * h
        n = [int(round((b - a) / h)) + 1 + 2 * steps
             for a, b in zip(domain.lo, domain.hi)]
        axes = [origin[i] + h * np.arange(n[i]) for i in range(domain.dim)]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        flat = pts.reshape(-1, domain.dim)
        mask = domain.contains(flat).reshape(pts.shape[:-1])
        vals = np.asarray(fn(flat), dtype=np.float64)
        if vals.ndim == 1:
            vals = vals[:, None]
        vals = vals.reshape(pts.shape[:-1] + (vals.shape[-1],))
        if arity is not None and vals.shape[-1] != arity:
            raise ValueError(f"function returned arity {vals.shape[-1]}, expected {arity}")
        return cls(vals, mask, float(h), origin, domain)

    def like(self, values, mask=None) -> "SampledFunction":
        return SampledFunction(values, self.mask if mask is None else mask,
                               self.h, self.origin, self.domain)

    # arithmetic (linearity helpers) ---------------------------------------
    def __add__(self, other):
        if isinstance(other, SampledFunction):
            return self.like(self.values + other.values, self.mask & other.mask)
        return self.like(self.values + other)

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            return self.like(self.values - other.values, self.mask & other.mask)
        return self.like(self.values - other)

    def __mul__(self, c):
        if isinstance(c, SampledFunction):
            if self.arity != 1 or c.arity != 1:
                raise ValueError("pointwise product needs scalar fields")
            return self.like(self.values * c.values, self.mask & c.mask)
        return self.like(self.values * float(c))

    __rmul__ = __mul__

    # interpolation ---------------------------------------------------------
    def interpolate(self, pts) -> tuple[np.ndarray, np.ndarray]:
        """Multilinear interpolation; returns (values, valid mask).

        A query point is valid only when the 2^d surrounding nodes are
        all present; no extrapolation is attempted.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        npts = pts.shape[0]
        u = (pts - self.origin) / self.h
        nshape = np.asarray(self.shape)
        inb = np.all((u >= -1e-9) & (u <= nshape - 1 + 1e-9), axis=1)
        u = np.clip(u, 0.0, nshape - 1)
        i0 = np.minimum(np.floor(u + 1e-12).astype(int), nshape - 2)
        i0 = np.maximum(i0, 0)
        f = u - i0
        out = np.zeros((npts, self.arity))
        valid = inb.copy()
        for corner in range(1 << self.dim):
            idx = tuple(
                i0[:, k] + ((corner >> k) & 1) for k in range(self.dim)
            )
            w = np.ones(npts)
            for k in range(self.dim):
                fk = f[:, k]
                w = w * (fk if (corner >> k) & 1 else 1.0 - fk)
            valid &= self.mask[idx] | (w < 1e-12)
            out += w[:, None] * self.values[idx]
        return out, valid

    # io ---------------------------------------------------------------------
    def save(self, path):
        header = {
            "h": self.h,
            "origin": self.origin.tolist(),
            "shape": list(self.shape),
            "arity": self.arity,
            "bbox": [self.origin.tolist(),
                     (self.origin + self.h * (np.asarray(self.shape) - 1)).tolist()],
            "domain": getattr(self.domain, "name", None),
            "values": base64.b64encode(
                np.ascontiguousarray(self.values, dtype="<f8").tobytes()).decode(),
            "mask": base64.b64encode(
                np.ascontiguousarray(self.mask, dtype=np.uint8).tobytes()).decode(),
        }
        with open(path, "w") as fh:
            json.dump(header, fh)

    @classmethod
    def load(cls, path) -> "SampledFunction":
        with open(path) as fh:
            header = json.load(fh)
        shape = tuple(header["shape"])
        arity = header["arity"]
        vals = np.frombuffer(base64.b64decode(header["values"]), dtype="<f8")
        vals = vals.reshape(shape + (arity,)).copy()
        mask = np.frombuffer(base64.b64decode(header["mask"]), dtype=np.uint8)
        mask = mask.reshape(shape).astype(bool)
        domain = None
        if header.get("domain"):
            try:
                domain = domain_from_name(header["domain"])
            except Exception:
                domain = None
        return cls(vals, mask, float(header["h"]), np.asarray(header["origin"]), domain)


def require_present(f: SampledFunction, minimum: int = 1):
    if f.n_present() < minimum:
        raise DegenerateInputError(
            f"need at least {minimum} present sample(s), have {f.n_present()}"
        )
