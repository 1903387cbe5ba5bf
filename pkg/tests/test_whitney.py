import json

import numpy as np
import pytest

from tldiff.errors import InfeasibleConstantError, InvalidDomainError
from tldiff.geometry import build_whitney, domain_from_name, long_distance

CW = 1.0


@pytest.fixture(scope="module")
def coverings():
    out = {}
    for name in ("interval", "square", "l-shape", "slit-square"):
        dom = domain_from_name(name)
        out[name] = (dom, build_whitney(dom, cw=CW, max_generation=6))
    return out


def sandwich_holds(dom, cov, cubes, outer=False):
    lo = np.array([q.lo for q in cubes])
    hi = np.array([q.hi for q in cubes])
    sides = np.array([q.side for q in cubes])
    dist = dom.boundary_distance_boxes(lo, hi, outer=outer)
    D = sides + dist
    return np.all(D >= CW * sides * (1 - 1e-9)) and np.all(D <= 4 * CW * sides * (1 + 1e-9))


def test_sandwich_all_domains(coverings):
    for name, (dom, cov) in coverings.items():
        assert sandwich_holds(dom, cov, cov.interior), name
        assert sandwich_holds(dom, cov, cov.exterior, outer=True), name


def test_interior_cubes_disjoint_and_inside(coverings):
    for name, (dom, cov) in coverings.items():
        keys = set()
        for q in cov.interior:
            assert q.key() not in keys
            keys.add(q.key())
            assert dom.contains([q.center])[0], name
        # pairwise interior disjointness on a sample of pairs
        rng = np.random.default_rng(0)
        cubes = cov.interior
        for _ in range(200):
            i, j = rng.integers(0, len(cubes), 2)
            if i == j:
                continue
            q, s = cubes[int(i)], cubes[int(j)]
            overlap = np.minimum(q.hi, s.hi) - np.maximum(q.lo, s.lo)
            assert overlap.min() <= 1e-12


def test_closure_covers_interior_minus_collar(coverings):
    for name, (dom, cov) in coverings.items():
        rng = np.random.default_rng(1)
        pts = rng.uniform(dom.lo, dom.hi, size=(400, dom.dim))
        pts = pts[dom.contains(pts)]
        finest = cov.frame.unit * 2.0 ** (-cov.max_generation)
        dist = dom.boundary_distance_points(pts)
        lo = np.array([q.lo for q in cov.interior])
        hi = np.array([q.hi for q in cov.interior])
        for x, dx in zip(pts, dist):
            covered = np.any(np.all((lo <= x + 1e-12) & (x <= hi + 1e-12), axis=1))
            # points missed by the covering sit in the unresolved collar
            assert covered or dx <= 8 * finest, (name, x, dx)


def test_interval_accumulation_and_generation_counts():
    dom = domain_from_name("interval")
    for gen in (5, 6, 7):
        cov = build_whitney(dom, cw=CW, max_generation=gen)
        sides = sorted({q.side for q in cov.interior})
        # geometric accumulation toward the endpoints: all scales appear
        assert sides[0] == 2.0 ** (-gen)
        by_side = {}
        for q in cov.interior:
            by_side.setdefault(q.side, []).append(q)
        for side, qs in by_side.items():
            assert len(qs) <= 4
        # brute-force dyadic scan oracle at each generation
        for m in range(2, gen + 1):
            side = 2.0**-m
            count = 0
            for i in range(2**m):
                a, b = i * side, (i + 1) * side
                dist = min(a, 1 - b)
                inside = a > 0 and b < 1
                admitted = inside and dist >= (CW - 1) * side
                pa, pb = (i // 2) * 2 * side, (i // 2 + 1) * 2 * side
                parent_ok = pa > 0 and pb < 1 and min(pa, 1 - pb) >= (CW - 1) * 2 * side
                if admitted and not parent_ok:
                    count += 1
            assert count == len(by_side.get(side, [])) or m == gen


def test_neighbor_side_ratio(coverings):
    for name, (dom, cov) in coverings.items():
        assert cov.neighbor_ratio_violations == 0, name
        for q in cov.interior[::7]:
            for s in cov.neighbors(q):
                assert 0.5 - 1e-12 <= s.side / q.side <= 2 + 1e-12


def test_symmetrization_properties(coverings):
    for name, (dom, cov) in coverings.items():
        assert not cov.dropped, name
        preimages = {}
        for q in cov.cubes("W3"):
            s = cov.sym_partner(q)
            assert s is not None
            assert s.side == pytest.approx(q.side)
            assert long_distance(q, s) <= cov.sym_c * q.side * (1 + 1e-9)
            preimages[s.key()] = preimages.get(s.key(), 0) + 1
        assert max(preimages.values()) <= 12, name


def test_symmetrization_long_distance_comparable(coverings):
    for name, (dom, cov) in coverings.items():
        w3 = cov.cubes("W3")
        rng = np.random.default_rng(2)
        ratios = []
        for _ in range(100):
            i, j = rng.integers(0, len(w3), 2)
            q1, q2 = w3[int(i)], w3[int(j)]
            s1, s2 = cov.sym_partner(q1), cov.sym_partner(q2)
            d = long_distance(q1, q2)
            ratios.append(long_distance(s1, s2) / d)
        assert max(ratios) < 60, name


def test_finite_superposition_of_dilated_cubes(coverings):
    for name, (dom, cov) in coverings.items():
        rng = np.random.default_rng(4)
        pts = rng.uniform(dom.lo, dom.hi, size=(100, dom.dim))
        lo = np.array([q.dilated_bounds(50)[0] for q in cov.interior])
        hi = np.array([q.dilated_bounds(50)[1] for q in cov.interior])
        sides = np.array([q.side for q in cov.interior])
        finest = cov.frame.unit * 2.0 ** (-cov.max_generation)
        counts = []
        for x in pts:
            inside = np.all((lo <= x) & (x <= hi), axis=1)
            # superposition is uniform per scale
            for side in np.unique(sides[inside]):
                counts.append(int(np.sum(inside & (sides == side))))
        assert max(counts) <= 55**2 * 4


def test_w_family_nesting(coverings):
    for name, (dom, cov) in coverings.items():
        w0 = {q.key() for q in cov.cubes("W0")}
        w1 = {q.key() for q in cov.cubes("W1")}
        w2 = {q.key() for q in cov.cubes("W2")}
        w3 = {q.key() for q in cov.cubes("W3")}
        w4 = {q.key() for q in cov.cubes("W4")}
        assert w1 <= w0 and w4 <= w3 <= w2
        for key in w4:
            cube = cov.lookup(*key)
            assert all(n.key() in w3 for n in cov.neighbors(cube))


def test_export_jsonl_schema(tmp_path, coverings):
    dom, cov = coverings["square"]
    path = tmp_path / "cov.jsonl"
    cov.export_jsonl(path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == len(cov.interior) + len(cov.exterior)
    rec = json.loads(lines[0])
    assert set(rec) == {"generation", "coords", "side", "center", "family", "symmetrized"}
    assert cov.content_hash() == build_whitney(dom, cw=CW, max_generation=6).content_hash()


def test_infeasible_constant_raises():
    dom = domain_from_name("square")
    with pytest.raises(InfeasibleConstantError):
        build_whitney(dom, cw=0.5, max_generation=4)


def test_empty_interior_raises():
    from tldiff.geometry import SdfDomain
    sdf = SdfDomain.from_function(lambda p: -np.ones(p.shape[0]), (0, 0), (1, 1), n=17)
    with pytest.raises(InvalidDomainError):
        build_whitney(sdf, cw=1.0, max_generation=4)
