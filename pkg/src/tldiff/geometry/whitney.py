"""Whitney coverings of a domain and of its complement.

Construction is the classic dyadic sweep: starting from coarse lattice
cells, a cell is admitted when it sits strictly inside the open set and
its distance to the boundary is at least (C_W - 1) times its side;
otherwise its children are visited.  Admitted cubes then satisfy the
sandwich

    C_W * l(Q) <= l(Q) + dist(Q, boundary) <= 4 * C_W * l(Q)

(the upper bound follows from the rejection of the parent; it is checked
cube by cube and a violation raises).  The sweep is vectorized per
generation, so coverings with 1e5 cubes build in well under a second.

The exterior covering measures distances against the boundary of the
closure's complement: slits vanish there, which is exactly what makes
slit domains extendable for low smoothness.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import CoveringError, InfeasibleConstantError, InvalidDomainError
from .cubes import DyadicCube, Frame, long_distance
from .domains import Domain

_TOL = 1e-12


@dataclass
class _CubeTable:
    """Per-generation arrays for one covering, for vectorized queries."""

    generations: dict = field(default_factory=dict)  # gen -> dict of arrays

    @classmethod
    def from_cubes(cls, cubes):
        table = cls()
        by_gen = {}
        for i, q in enumerate(cubes):
            by_gen.setdefault(q.generation, []).append(i)
        for gen, idx in by_gen.items():
            idx = np.asarray(idx, dtype=int)
            centers = np.asarray([cubes[i].center for i in idx], dtype=float)
            sides = np.asarray([cubes[i].side for i in idx], dtype=float)
            table.generations[gen] = {
                "index": idx,
                "centers": centers,
                "lo": centers - 0.5 * sides[:, None],
                "hi": centers + 0.5 * sides[:, None],
                "side": float(sides[0]),
            }
        return table


class WhitneyCovering:
    """Interior covering W0, exterior covering W2, and derived families.

    W1: interior cubes with side <= c0 * ell0.
    W3: exterior cubes with side < 10 * ell0.
    W4: W3 cubes all of whose exterior neighbors are again in W3 (cubes
        touching the truncation frontier of the exterior sweep are
        excluded, since their neighborhood is not fully represented).

    The symmetrization map sends each W3 cube to an equal-sided W1 cube
    at long distance <= sym_c * l(Q), chosen greedily: minimal long
    distance, ties broken by lexicographic lattice coordinates.
    """

    def __init__(self, domain, cw, max_generation, frame, interior, exterior,
                 ell0, c0, sym_c, delta, margin, uncovered_interior,
                 uncovered_exterior, margin_lo, margin_hi):
        self.domain = domain
        self.cw = float(cw)
        self.max_generation = int(max_generation)
        self.frame = frame
        self.interior = interior
        self.exterior = exterior
        self.ell0 = float(ell0)
        self.c0 = float(c0)
        self.sym_c = float(sym_c)
        self.delta = float(delta)
        self.margin = float(margin)
        self.uncovered_interior = float(uncovered_interior)
        self.uncovered_exterior = float(uncovered_exterior)
        self.margin_lo = margin_lo
        self.margin_hi = margin_hi

        self._int_index = {q.key(): q for q in interior}
        self._ext_index = {q.key(): q for q in exterior}
        self._int_table = _CubeTable.from_cubes(interior)
        self._ext_table = _CubeTable.from_cubes(exterior)

        self._int_adj = _build_adjacency(interior, self._int_index)
        self._ext_adj = _build_adjacency(exterior, self._ext_index)
        self.neighbor_ratio_violations = _ratio_violations(
            interior, self._int_adj, self._int_index
        ) + _ratio_violations(exterior, self._ext_adj, self._ext_index)

        self.w1_keys = {
            q.key() for q in interior if q.side <= c0 * ell0 * (1.0 + _TOL)
        }
        self.w3_keys = {
            q.key() for q in exterior if q.side < 10.0 * ell0 * (1.0 + _TOL)
        }
        self.w4_keys = self._compute_w4()
        self.symmetrization, self.dropped = self._symmetrize()

    # families ----------------------------------------------------------
    def cubes(self, family: str = "W0"):
        fam = family.upper()
        if fam == "W0":
            return list(self.interior)
        if fam == "W1":
            return [q for q in self.interior if q.key() in self.w1_keys]
        if fam == "W2":
            return list(self.exterior)
        if fam == "W3":
            return [q for q in self.exterior if q.key() in self.w3_keys]
        if fam == "W4":
            return [q for q in self.exterior if q.key() in self.w4_keys]
        raise CoveringError(f"unknown family {family!r}")

    def family_tag(self, cube: DyadicCube) -> str:
        k = cube.key()
        if k in self._int_index:
            return "W1" if k in self.w1_keys else "W0"
        if k in self._ext_index:
            if k in self.w4_keys:
                return "W4"
            return "W3" if k in self.w3_keys else "W2"
        raise CoveringError("cube is not part of this covering")

    def is_interior(self, cube: DyadicCube) -> bool:
        return cube.key() in self._int_index

    def lookup(self, generation: int, coords) -> DyadicCube:
        key = (int(generation), tuple(int(c) for c in coords))
        cube = self._int_index.get(key) or self._ext_index.get(key)
        if cube is None:
            raise CoveringError(f"no cube at generation {generation}, coords {coords}")
        return cube

    def neighbors(self, cube: DyadicCube) -> list[DyadicCube]:
        k = cube.key()
        if k in self._int_index:
            return [self._int_index[j] for j in self._int_adj[k]]
        if k in self._ext_index:
            return [self._ext_index[j] for j in self._ext_adj[k]]
        raise CoveringError("cube is not part of this covering")

    def sym_partner(self, cube: DyadicCube):
        key = self.symmetrization.get(cube.key())
        return self._int_index[key] if key is not None else None

    # queries ------------------------------------------------------------
    def largest_cube_in_ball(self, center, radius, family: str = "W0"):
        """Largest covering cube contained in B(center, radius), or None."""
        center = np.asarray(center, dtype=float)
        table = self._int_table if family in ("W0", "W1") else self._ext_table
        cubes = self.interior if family in ("W0", "W1") else self.exterior
        best = None
        for gen in sorted(table.generations):
            g = table.generations[gen]
            if g["side"] > 2.0 * radius:
                continue
            far = np.maximum(np.abs(g["lo"] - center), np.abs(g["hi"] - center))
            dist = np.sqrt(np.sum(far * far, axis=1))
            ok = dist <= radius * (1.0 + _TOL)
            if ok.any():
                best = cubes[int(g["index"][np.argmax(ok)])]
                break  # generations sorted coarse to fine: first hit is largest
        return best

    def cubes_in_ball(self, center, radius, family: str = "W0"):
        """All covering cubes contained in the closed ball."""
        center = np.asarray(center, dtype=float)
        table = self._int_table if family in ("W0", "W1") else self._ext_table
        cubes = self.interior if family in ("W0", "W1") else self.exterior
        keep = []
        for gen, g in table.generations.items():
            far = np.maximum(np.abs(g["lo"] - center), np.abs(g["hi"] - center))
            dist = np.sqrt(np.sum(far * far, axis=1))
            for i in g["index"][dist <= radius * (1.0 + _TOL)]:
                keep.append(cubes[int(i)])
        return keep

    # construction helpers ------------------------------------------------
    def _compute_w4(self):
        w4 = set()
        for key in self.w3_keys:
            cube = self._ext_index[key]
            if self._touches_frontier(cube):
                continue
            if all(nk in self.w3_keys for nk in self._ext_adj[key]):
                w4.add(key)
        return w4

    def _touches_frontier(self, cube: DyadicCube) -> bool:
        pad = _TOL * max(1.0, self.frame.unit)
        return bool(
            np.any(cube.lo <= self.margin_lo + pad)
            or np.any(cube.hi >= self.margin_hi - pad)
        )

    def _symmetrize(self):
        by_gen = {}
        for q in self.interior:
            if q.key() in self.w1_keys:
                by_gen.setdefault(q.generation, []).append(q)
        gen_arrays = {}
        for gen, qs in by_gen.items():
            qsexp = sorted(qs, key=lambda c: c.coords)
            gen_arrays[gen] = (
                qsexp,
                np.asarray([c.center for c in qsexp], dtype=float),
            )
        mapping = {}
        dropped = []
        for key in sorted(self.w3_keys):
            cube = self._ext_index[key]
            entry = gen_arrays.get(cube.generation)
            if entry is None:
                dropped.append(key)
                continue
            cands, centers = entry
            half = 0.5 * cube.side
            g = np.maximum(np.abs(centers - np.asarray(cube.center)) - 2.0 * half, 0.0)
            dist = np.sqrt(np.sum(g * g, axis=1))
            dvals = 2.0 * cube.side + dist
            j = int(np.argmin(dvals))  # candidates sorted lexicographically: argmin keeps first
            if dvals[j] <= self.sym_c * cube.side * (1.0 + _TOL):
                mapping[key] = cands[j].key()
            else:
                dropped.append(key)
        return mapping, dropped

    # export --------------------------------------------------------------
    def export_records(self):
        recs = []
        for q in list(self.interior) + list(self.exterior):
            partner = self.symmetrization.get(q.key())
            recs.append({
                "generation": q.generation,
                "coords": list(q.coords),
                "side": q.side,
                "center": list(q.center),
                "family": self.family_tag(q),
                "symmetrized": list(partner[1]) if partner is not None else None,
            })
        return recs

    def export_jsonl(self, path):
        with open(path, "w") as fh:
            for rec in self.export_records():
                fh.write(json.dumps(rec) + "\n")

    def content_hash(self) -> str:
        payload = json.dumps(self.export_records(), sort_keys=True).encode()
        return base64.b16encode(hashlib.sha256(payload).digest()).decode().lower()[:16]

    def __repr__(self):
        return (f"WhitneyCovering({self.domain.name!r}, cw={self.cw}, "
                f"interior={len(self.interior)}, exterior={len(self.exterior)})")


def _build_adjacency(cubes, index):
    """Neighbor lists (keys) for one covering: closures intersect."""
    adj = {q.key(): set() for q in cubes}
    gens = sorted({q.generation for q in cubes})
    gen_min = gens[0] if gens else 0
    dim = cubes[0].dim if cubes else 0
    offsets = _neighbor_offsets(dim)
    for q in cubes:
        g, c = q.generation, q.coords
        for off in offsets:
            cell = tuple(ci + oi for ci, oi in zip(c, off))
            # same generation
            hit = index.get((g, cell))
            if hit is not None:
                adj[q.key()].add(hit.key())
                continue
            # coarser ancestors
            found = False
            cc = cell
            for gg in range(g - 1, gen_min - 1, -1):
                cc = tuple(v >> 1 for v in cc)
                hit = index.get((gg, cc))
                if hit is not None:
                    adj[q.key()].add(hit.key())
                    found = True
                    break
            if found:
                continue
            # finer descendants, two levels deep
            stack = [(g, cell)]
            for _ in range(2):
                nxt = []
                for gg, cc in stack:
                    for child in _children(cc):
                        kk = (gg + 1, child)
                        hit = index.get(kk)
                        if hit is not None and hit.touches(q):
                            adj[q.key()].add(kk)
                        else:
                            nxt.append((gg + 1, child))
                stack = nxt
    return {k: sorted(v) for k, v in adj.items()}


def _children(coords):
    dim = len(coords)
    out = []
    for bits in range(1 << dim):
        out.append(tuple(2 * c + ((bits >> i) & 1) for i, c in enumerate(coords)))
    return out


def _neighbor_offsets(dim):
    if dim == 0:
        return []
    ranges = [(-1, 0, 1)] * dim
    out = []
    def rec(prefix, rest):
        if not rest:
            if any(prefix):
                out.append(tuple(prefix))
            return
        for v in rest[0]:
            rec(prefix + [v], rest[1:])
    rec([], ranges)
    return out


def _ratio_violations(cubes, adj, index):
    bad = 0
    for q in cubes:
        for nk in adj[q.key()]:
            s = index[nk]
            r = s.side / q.side
            if r < 0.5 - _TOL or r > 2.0 + _TOL:
                bad += 1
    return bad // 2


def _sweep(domain: Domain, frame: Frame, cw: float, max_generation: int,
           outer: bool, margin_lo=None, margin_hi=None, root_gen: int = 0,
           root_cells=None):
    """One dyadic sweep; returns (cubes, uncovered_measure)."""
    dim = domain.dim
    unit = frame.unit
    origin = np.asarray(frame.origin)
    cubes = []
    uncovered = 0.0
    first_violation = [None]

    cells = np.asarray(root_cells if root_cells is not None else [(0,) * dim], dtype=int)
    gen = root_gen
    while gen <= max_generation and len(cells):
        side = unit * 2.0 ** (-gen)
        lo = origin + cells * side
        hi = lo + side
        centers = lo + 0.5 * side
        dist = domain.boundary_distance_boxes(lo, hi, outer=outer)
        if outer:
            inside_open = ~domain.in_closure(centers)
            inside_open &= domain.boundary_distance_points(centers, outer=True) > 0
        else:
            inside_open = domain.contains(centers)
        strictly_inside = inside_open & (dist > _TOL * unit)
        admit = strictly_inside & (dist >= (cw - 1.0) * side * (1.0 - 1e-9))
        if margin_lo is not None:
            in_margin = np.all(hi > margin_lo + _TOL, axis=1) & np.all(lo < margin_hi - _TOL, axis=1)
            admit &= in_margin
        else:
            in_margin = np.ones(len(cells), dtype=bool)

        # sandwich check on admitted cubes
        if admit.any():
            dvals = side + dist[admit]
            bad_lo = dvals < cw * side * (1.0 - 1e-9)
            bad_hi = dvals > 4.0 * cw * side * (1.0 + 1e-9)
            if bad_lo.any() or bad_hi.any():
                j = int(np.argmax(bad_lo | bad_hi))
                cell = cells[admit][j]
                cube = frame.cube(gen, tuple(cell))
                raise InfeasibleConstantError(
                    f"Whitney sandwich fails for C_W={cw} at generation {gen}, "
                    f"coords {tuple(int(v) for v in cell)}: D={dvals[j]:.6g}, "
                    f"side={side:.6g}",
                    cube=cube,
                )
            for cell in cells[admit]:
                cubes.append(frame.cube(gen, tuple(cell)))

        # recurse: cells that straddle the boundary, or interior cells
        # failing the lower bound (only possible for C_W > 1)
        touches = dist <= _TOL * unit
        straddle = touches & _cell_meets_set(domain, lo, hi, centers, outer)
        too_close = strictly_inside & ~admit & in_margin
        descend = (straddle | too_close) & in_margin
        if gen == max_generation:
            uncovered += float(np.sum(descend) * side**dim)
            break
        next_cells = []
        for cell in cells[descend]:
            base = cell * 2
            for bits in range(1 << dim):
                next_cells.append(tuple(base[i] + ((bits >> i) & 1) for i in range(dim)))
        cells = np.asarray(next_cells, dtype=int).reshape(-1, dim)
        gen += 1
    return cubes, uncovered


def _balance(cubes, domain, frame, cw, max_generation, outer):
    """Split cubes whose neighbors are more than twice as small.

    A split is allowed only when every child still satisfies the
    sandwich; otherwise the cube is left in place and counted as stuck.
    On lattice-aligned domains the sweep already produces balanced
    coverings and this pass is a no-op; it matters at reentrant corners
    seen from the complement and on non-aligned boundaries.
    """
    index = {q.key(): q for q in cubes}
    stuck = set()
    for _round in range(max_generation + 4):
        ordered = sorted(index.values(), key=lambda c: (c.generation, c.coords))
        adj = _build_adjacency(ordered, index)
        violators = []
        for q in ordered:
            if q.key() in stuck:
                continue
            for nk in adj[q.key()]:
                if index[nk].side < 0.5 * q.side * (1.0 - _TOL):
                    violators.append(q)
                    break
        if not violators:
            break
        progress = False
        for q in violators:
            if q.generation >= max_generation:
                stuck.add(q.key())
                continue
            children = [frame.cube(q.generation + 1, cc) for cc in q.child_coords()]
            lo = np.asarray([c.lo for c in children])
            hi = np.asarray([c.hi for c in children])
            dist = domain.boundary_distance_boxes(lo, hi, outer=outer)
            side = children[0].side
            if np.any(side + dist > 4.0 * cw * side * (1.0 + 1e-9)):
                stuck.add(q.key())
                continue
            del index[q.key()]
            for c in children:
                index[c.key()] = c
            progress = True
        if not progress:
            break
    ordered = sorted(index.values(), key=lambda c: (c.generation, c.coords))
    return ordered, len(stuck)


def _cell_meets_set(domain, lo, hi, centers, outer):
    """Whether a boundary-touching cell intersects the target open set.

    A cell at distance zero from the boundary may still be relevant only
    on one side; probing the 3^d stencil of the cell settles it.
    """
    n, dim = centers.shape
    offs = np.stack(
        np.meshgrid(*([np.array([0.05, 0.5, 0.95])] * dim), indexing="ij"), axis=-1
    ).reshape(-1, dim)
    pts = lo[:, None, :] + offs[None, :, :] * (hi - lo)[:, None, :]
    flat = pts.reshape(-1, dim)
    if outer:
        hit = ~domain.in_closure(flat)
    else:
        hit = domain.contains(flat)
    return hit.reshape(n, -1).any(axis=1)


def build_whitney(domain: Domain, cw: float = 1.0, max_generation: int = 7, *,
                  ell0: float | None = None, c0: float = 10.0,
                  sym_c: float = 50.0, margin: float | None = None,
                  delta: float | None = None) -> WhitneyCovering:
    """Build interior and exterior Whitney coverings of a domain.

    max_generation caps the refinement: cells finer than
    unit * 2**-max_generation are not emitted, and the measure of the
    uncovered collar is recorded on the covering.
    """
    if cw < math.sqrt(domain.dim) - 0.5:
        raise InfeasibleConstantError(
            f"C_W={cw} cannot satisfy the sandwich in dimension {domain.dim}; "
            f"need C_W >= sqrt(d) - 1/2"
        )
    domain.validate()
    dim = domain.dim
    unit = float(np.max(domain.hi - domain.lo))
    frame = Frame(tuple(float(v) for v in domain.lo), unit)

    dlt = float(delta) if delta is not None else domain.corkscrew_delta
    l0 = float(ell0) if ell0 is not None else dlt / 100.0
    mrg = float(margin) if margin is not None else 0.5 * unit

    interior, unc_int = _sweep(domain, frame, cw, max_generation, outer=False)
    if not interior:
        raise InvalidDomainError(
            f"no interior Whitney cube up to generation {max_generation}"
        )
    interior, stuck_int = _balance(interior, domain, frame, cw, max_generation, outer=False)

    margin_lo = domain.lo - mrg
    margin_hi = domain.hi + mrg
    root_gen = -2
    root_side = unit * 2.0 ** (-root_gen)
    lo_cell = np.floor((margin_lo - frame.origin) / root_side).astype(int)
    hi_cell = np.floor((margin_hi - frame.origin) / root_side - 1e-12).astype(int)
    roots = []
    ranges = [range(lo_cell[i], hi_cell[i] + 1) for i in range(dim)]
    def rec(prefix, rest):
        if not rest:
            roots.append(tuple(prefix))
            return
        for v in rest[0]:
            rec(prefix + [v], rest[1:])
    rec([], ranges)
    exterior, unc_ext = _sweep(
        domain, frame, cw, max_generation, outer=True,
        margin_lo=margin_lo, margin_hi=margin_hi,
        root_gen=root_gen, root_cells=roots,
    )
    exterior, stuck_ext = _balance(exterior, domain, frame, cw, max_generation, outer=True)

    cov = WhitneyCovering(
        domain, cw, max_generation, frame, interior, exterior,
        l0, c0, sym_c, dlt, mrg, unc_int, unc_ext, margin_lo, margin_hi,
    )
    cov.balance_stuck = stuck_int + stuck_ext
    return cov
