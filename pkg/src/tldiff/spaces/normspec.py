"""Parameter tuple of the first-order-difference smoothness norm."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import SpecError


@dataclass(frozen=True)
class NormSpec:
    """Smoothness s = k + sigma, outer p, inner q, ball index u, radius rho.

    Admissibility: s must not be an integer, rho lies in (0, 1], and the
    auxiliary index must satisfy sigma > d/min(p, q) - d/u in the grid
    dimension d the norm is evaluated in (checked per call since the
    spec itself is dimension-agnostic).
    """

    s: float
    p: float
    q: float
    u: float
    rho: float = 1.0

    def __post_init__(self):
        if self.s <= 0 or float(self.s).is_integer():
            raise SpecError(f"smoothness s={self.s} must be positive and non-integer")
        if not 1 <= self.p < math.inf:
            raise SpecError(f"p={self.p} must lie in [1, inf)")
        if not 1 <= self.q:
            raise SpecError(f"q={self.q} must lie in [1, inf]")
        if not 1 <= self.u:
            raise SpecError(f"u={self.u} must lie in [1, inf]")
        if not 0 < self.rho <= 1:
            raise SpecError(f"rho={self.rho} must lie in (0, 1]")

    @property
    def k(self) -> int:
        return int(math.floor(self.s))

    @property
    def sigma(self) -> float:
        return self.s - self.k

    def index_gap(self, d: int) -> float:
        """sigma - (d/min(p,q) - d/u); must be positive."""
        du = 0.0 if self.u == math.inf else d / self.u
        return self.sigma - (d / min(self.p, self.q) - du)

    def validate_for_dim(self, d: int) -> "NormSpec":
        if self.index_gap(d) <= 0:
            raise SpecError(
                f"auxiliary index fails in dimension {d}: need "
                f"sigma > d/min(p,q) - d/u (sigma={self.sigma}, p={self.p}, "
                f"q={self.q}, u={self.u})"
            )
        return self

    def with_rho(self, rho: float) -> "NormSpec":
        return NormSpec(self.s, self.p, self.q, self.u, rho)

    def label(self) -> str:
        def fmt(v):
            return "inf" if v == math.inf else f"{v:g}"
        return f"s={self.s:g},p={fmt(self.p)},q={fmt(self.q)},u={fmt(self.u)},rho={self.rho:g}"
