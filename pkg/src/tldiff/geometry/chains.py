"""Admissible chains, shadows, and the corkscrew / uniformity checks.

A chain between two cubes is certified a-posteriori: the search returns
a shortest-weighted path in the neighbor graph (edge weight: side of the
entered cube) together with the largest admissibility parameter among
the candidate paths examined (the weighted shortest path and the
fewest-hops path).

Certification: with D the long distance and l([Q,S]) the summed sides,

    epsilon_length = D(Q, S) / l([Q, S])

and the growth conditions are evaluated at the interior indices of the
chain (the endpoint terms degenerate to l(Q)/D(Q,Q) = 1/2 under the
adopted self-distance D(Q,Q) = 2 l(Q) and carry no geometric content).
The certified epsilon is the minimum of both parts, maximized over the
choice of central index.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from ..errors import CoveringError
from .cubes import DyadicCube, long_distance
from .whitney import WhitneyCovering


@dataclass(frozen=True)
class Chain:
    cubes: tuple[DyadicCube, ...]
    j0: int                      # index of the central cube
    epsilon: float               # certified admissibility parameter

    def __len__(self):
        return len(self.cubes)

    @property
    def central(self) -> DyadicCube:
        return self.cubes[self.j0]

    @property
    def length(self) -> float:
        """l([Q,S]): sum of the sides."""
        return float(sum(q.side for q in self.cubes))


def _certify(path: list[DyadicCube]) -> tuple[int, float]:
    """Best (j0, epsilon) for a fixed cube sequence."""
    m = len(path)
    d_qs = long_distance(path[0], path[-1])
    ell = sum(q.side for q in path)
    eps_len = d_qs / ell
    if m <= 2:
        j0 = int(np.argmax([q.side for q in path]))
        return j0, eps_len
    # growth ratios at interior indices 1..m-2 (0-based)
    a = np.array([path[j].side / long_distance(path[0], path[j]) for j in range(m)])
    b = np.array([path[j].side / long_distance(path[j], path[-1]) for j in range(m)])
    big = np.inf
    pre = np.full(m, big)   # pre[j] = min a over interior indices <= j
    run = big
    for j in range(m):
        if 1 <= j <= m - 2:
            run = min(run, a[j])
        pre[j] = run
    suf = np.full(m, big)
    run = big
    for j in range(m - 1, -1, -1):
        if 1 <= j <= m - 2:
            run = min(run, b[j])
        suf[j] = run
    eps_growth = np.minimum(pre, suf)
    j0 = int(np.argmax(eps_growth))
    return j0, float(min(eps_len, eps_growth[j0]))


def _shortest_path(cov: WhitneyCovering, start, goal, weighted: bool):
    """Dijkstra (weighted=True) or BFS-by-hops path; None if disconnected."""
    skey, gkey = start.key(), goal.key()
    dist = {skey: start.side if weighted else 0.0}
    parent = {skey: None}
    heap = [(dist[skey], skey)]
    seen = set()
    while heap:
        d, key = heapq.heappop(heap)
        if key in seen:
            continue
        seen.add(key)
        if key == gkey:
            break
        cube = cov.lookup(*key)
        for nb in cov.neighbors(cube):
            nk = nb.key()
            w = nb.side if weighted else 1.0
            nd = d + w
            if nd < dist.get(nk, np.inf) - 1e-15:
                dist[nk] = nd
                parent[nk] = key
                heapq.heappush(heap, (nd, nk))
    if gkey not in parent and skey != gkey:
        return None
    path = []
    key = gkey
    while key is not None:
        path.append(cov.lookup(*key))
        key = parent.get(key)
        if key is None and path[-1].key() != skey:
            return None
    path.reverse()
    return path


def find_chain(cov: WhitneyCovering, q: DyadicCube, s: DyadicCube):
    """Chain joining two interior cubes, or None when disconnected."""
    for cube in (q, s):
        if not cov.is_interior(cube):
            raise CoveringError(f"cube {cube.key()} is not an interior cube of this covering")
    if q.key() == s.key():
        j0, eps = _certify([q])
        return Chain((q,), j0, eps)
    best = None
    for weighted in (True, False):
        path = _shortest_path(cov, q, s, weighted)
        if path is None:
            continue
        j0, eps = _certify(path)
        if best is None or eps > best.epsilon:
            best = Chain(tuple(path), j0, eps)
    return best


# shadows ----------------------------------------------------------------

@dataclass(frozen=True)
class Shadow:
    anchor: DyadicCube
    rho: float
    cubes: tuple[DyadicCube, ...]

    def realization_measure(self) -> float:
        d = self.anchor.dim
        return float(sum(q.side**d for q in self.cubes))

    def __contains__(self, cube: DyadicCube):
        return any(c.key() == cube.key() for c in self.cubes)


def shadow_of(cov: WhitneyCovering, p: DyadicCube, rho: float,
              family: str = "W0") -> Shadow:
    """Covering cubes contained in B(x_P, rho * l(P))."""
    if rho < 1.0:
        raise ValueError("shadow radius multiplier must satisfy rho >= 1")
    cubes = cov.cubes_in_ball(np.asarray(p.center), rho * p.side, family=family)
    cubes.sort(key=lambda c: c.key())
    return Shadow(p, float(rho), tuple(cubes))


def shadow_sum_constants(cov: WhitneyCovering, rho: float, s: float = 1.0,
                         family: str = "W0"):
    """Empirical constants of the two shadow summation bounds.

    Returns (c_neg, c_vol) where, over all cubes Q of the covering,

        sum_{L : Q in SH(L)} l(L)^-s   <= c_neg * l(Q)^-s
        sum_{S in SH(Q)}     l(S)^d    <= c_vol * l(Q)^d
    """
    cubes = cov.cubes(family)
    d = cov.domain.dim
    shadows = {q.key(): shadow_of(cov, q, rho, family) for q in cubes}
    members = {q.key(): {c.key() for c in shadows[q.key()].cubes} for q in cubes}
    c_neg = 0.0
    c_vol = 0.0
    for q in cubes:
        inv = sum(l.side**-s for l in cubes if q.key() in members[l.key()])
        c_neg = max(c_neg, inv * q.side**s)
        vol = sum(c.side**d for c in shadows[q.key()].cubes)
        c_vol = max(c_vol, vol / q.side**d)
    return c_neg, c_vol


def estimate_rho_eps(cov: WhitneyCovering, chains) -> float:
    """Smallest rho so every sampled chain sits in the relevant shadows.

    Checks that each chain cube P shadows the endpoint Q, and that every
    chain cube lies in the shadow of the central cube.
    """
    rho = 1.0
    for ch in chains:
        if ch is None:
            continue
        q = ch.cubes[0]
        center = np.asarray(ch.central.center)
        for p in ch.cubes:
            far = float(np.linalg.norm(
                np.maximum(np.abs(q.lo - np.asarray(p.center)),
                           np.abs(q.hi - np.asarray(p.center)))))
            rho = max(rho, far / p.side)
            farc = float(np.linalg.norm(
                np.maximum(np.abs(p.lo - center), np.abs(p.hi - center))))
            rho = max(rho, farc / ch.central.side)
    return rho


# empirical certification --------------------------------------------------

@dataclass
class CorkscrewReport:
    eps_empirical: float
    delta: float
    worst: tuple | None            # (x, r, best_side) attaining the minimum
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.eps_empirical > 0.0


def check_corkscrew(domain, cov: WhitneyCovering, radii=None,
                    boundary_points=None) -> CorkscrewReport:
    """Empirical interior corkscrew constant over sampled boundary balls."""
    delta = cov.delta
    if radii is None:
        h = cov.frame.unit * 2.0 ** (-cov.max_generation)
        radii = []
        r = delta
        while r >= 8.0 * h:
            radii.append(r)
            r /= 2.0
    if boundary_points is None:
        boundary_points = domain.boundary_points(9)
    eps = np.inf
    worst = None
    failures = []
    for x in np.atleast_2d(boundary_points):
        for r in radii:
            cube = cov.largest_cube_in_ball(x, float(r), family="W0")
            if cube is None:
                failures.append((tuple(float(v) for v in x), float(r)))
                continue
            ratio = cube.side / float(r)
            if ratio < eps:
                eps = ratio
                worst = (tuple(float(v) for v in x), float(r), cube.side)
    return CorkscrewReport(float(eps), float(delta), worst, failures)


@dataclass
class UniformityReport:
    eps_empirical: float
    worst_pair: tuple | None
    disconnected: list = field(default_factory=list)
    n_pairs: int = 0

    @property
    def passed(self) -> bool:
        return not self.disconnected and np.isfinite(self.eps_empirical)


def sample_cube_pairs(cov: WhitneyCovering, delta: float, n: int = 64,
                      seed: int = 0):
    """Seeded sample of interior cube pairs with D(Q, S) <= delta."""
    rng = np.random.default_rng(seed)
    cubes = sorted(cov.interior, key=lambda c: c.key())
    pairs = []
    attempts = 0
    while len(pairs) < n and attempts < 200 * n:
        i, j = rng.integers(0, len(cubes), size=2)
        attempts += 1
        if i == j:
            continue
        q, s = cubes[int(i)], cubes[int(j)]
        if long_distance(q, s) <= delta:
            pairs.append((q, s))
    return pairs


def check_uniformity(cov: WhitneyCovering, cube_pair_sample, delta=None) -> UniformityReport:
    """Empirical uniformity constant: min certified epsilon over pairs."""
    eps = np.inf
    worst = None
    disconnected = []
    count = 0
    for q, s in cube_pair_sample:
        if delta is not None and long_distance(q, s) > delta:
            continue
        count += 1
        ch = find_chain(cov, q, s)
        if ch is None:
            disconnected.append((q.key(), s.key()))
            continue
        if ch.epsilon < eps:
            eps = ch.epsilon
            worst = (q.key(), s.key())
    return UniformityReport(float(eps), worst, disconnected, count)
