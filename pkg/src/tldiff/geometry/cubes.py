"""Dyadic cubes and the long distance between them.

Cubes live on the dyadic lattice of a reference frame: the frame fixes an
origin and the physical side of a generation-0 cell, and a cube of
generation ``m`` has side ``unit * 2**-m``.  Lattice coordinates are plain
integers and may be negative (cells outside the reference box are allowed;
exterior coverings use them).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np


@dataclass(frozen=True)
class Frame:
    """Origin and generation-0 cell size of a dyadic lattice."""

    origin: tuple[float, ...]
    unit: float = 1.0

    @property
    def dim(self) -> int:
        return len(self.origin)

    def cube(self, generation: int, coords: tuple[int, ...]) -> "DyadicCube":
        side = self.unit * 2.0 ** (-generation)
        center = tuple(o + (c + 0.5) * side for o, c in zip(self.origin, coords))
        return DyadicCube(generation, tuple(int(c) for c in coords), side, center)


@dataclass(frozen=True)
class DyadicCube:
    """One closed dyadic cube: generation, lattice coords, cached geometry.

    Two cubes of the same generation are disjoint (up to shared faces) or
    identical, and a cube's parent contains it; both facts are inherited
    from the integer lattice.
    """

    generation: int
    coords: tuple[int, ...]
    side: float
    center: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.center) - 0.5 * self.side

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self.center) + 0.5 * self.side

    def dilated_bounds(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        """Bounds of rQ: same center, side scaled by r."""
        half = 0.5 * r * self.side
        c = np.asarray(self.center)
        return c - half, c + half

    def parent_coords(self) -> tuple[int, ...]:
        return tuple(c >> 1 for c in self.coords)

    def child_coords(self) -> list[tuple[int, ...]]:
        return [
            tuple(2 * c + b for c, b in zip(self.coords, bits))
            for bits in product((0, 1), repeat=self.dim)
        ]

    def contains_point(self, x, closed: bool = True) -> bool:
        lo, hi = self.lo, self.hi
        x = np.asarray(x, dtype=float)
        if closed:
            return bool(np.all(x >= lo) and np.all(x <= hi))
        return bool(np.all(x > lo) and np.all(x < hi))

    def touches(self, other: "DyadicCube") -> bool:
        """Whether the closures intersect (the neighbor relation)."""
        return gap(self, other) <= 1e-12 * max(self.side, other.side)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.generation, self.coords)


def gap(q: DyadicCube, s: DyadicCube) -> float:
    """Euclidean distance between two closed cubes.

    Computed from coordinate-wise interval gaps; exact for axis-aligned
    boxes.
    """
    g = np.maximum(q.lo - s.hi, s.lo - q.hi)
    g = np.maximum(g, 0.0)
    return float(np.sqrt(np.sum(g * g)))


def long_distance(q: DyadicCube, s: DyadicCube) -> float:
    """D(Q, S) = l(Q) + l(S) + dist(Q, S).

    Symmetric, and always at least l(Q) + l(S).  This is the cube metric
    used by chains, shadows and the symmetrization map.
    """
    return q.side + s.side + gap(q, s)
