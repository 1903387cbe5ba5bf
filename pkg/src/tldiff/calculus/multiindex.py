"""Multiindex algebra and the slot-assignment vector of the chain rule."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iterproduct
from math import factorial

import numpy as np


def _as_tuple(alpha) -> tuple[int, ...]:
    if isinstance(alpha, MultiIndex):
        return alpha.exponents
    return tuple(int(a) for a in alpha)


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector with the usual modulus, factorial and partial order."""

    exponents: tuple[int, ...]

    def __init__(self, exponents):
        exps = _as_tuple(exponents)
        if any(e < 0 for e in exps):
            raise ValueError("multiindex entries must be nonnegative")
        object.__setattr__(self, "exponents", exps)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        """|alpha|, the total derivative order."""
        return sum(self.exponents)

    def factorial(self) -> int:
        out = 1
        for e in self.exponents:
            out *= factorial(e)
        return out

    def __le__(self, other) -> bool:
        other = _as_tuple(other)
        return len(self.exponents) == len(other) and all(
            a <= b for a, b in zip(self.exponents, other)
        )

    def __lt__(self, other) -> bool:
        return self <= other and self.exponents != _as_tuple(other)

    def __add__(self, other) -> "MultiIndex":
        other = _as_tuple(other)
        return MultiIndex(tuple(a + b for a, b in zip(self.exponents, other)))

    def __sub__(self, other) -> "MultiIndex":
        other = _as_tuple(other)
        return MultiIndex(tuple(a - b for a, b in zip(self.exponents, other)))

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]

    def __len__(self):
        return len(self.exponents)

    def monomial(self, x) -> np.ndarray:
        """x^alpha, broadcasting over leading axes of x."""
        x = np.asarray(x, dtype=float)
        out = np.ones(x.shape[:-1])
        for i, e in enumerate(self.exponents):
            if e:
                out = out * x[..., i] ** e
        return out

    def __repr__(self):
        return f"MultiIndex{self.exponents}"


def multiindices(dim: int, order: int) -> list[tuple[int, ...]]:
    """All multiindices of exact order, lexicographically descending.

    In 2D this gives the familiar derivative ordering (k,0), (k-1,1),
    ..., (0,k).
    """
    out = [t for t in _iterproduct(range(order, -1, -1), repeat=dim) if sum(t) == order]
    out.sort(reverse=True)
    return out


def multiindices_upto(dim: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for k in range(order + 1):
        out.extend(multiindices(dim, k))
    return out


def unit(dim: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(dim))


def m_vector(ivec) -> tuple[int, ...]:
    """Non-decreasing slot assignment with value-j multiplicity ivec[j].

    Components are 1-based: m((3, 2)) = (1, 1, 1, 2, 2).
    """
    ivec = _as_tuple(ivec)
    out = []
    for j, count in enumerate(ivec, start=1):
        out.extend([j] * count)
    return tuple(out)
