import numpy as np
import pytest

from tldiff.errors import CoveringError
from tldiff.geometry import (build_whitney, check_corkscrew, check_uniformity,
                             domain_from_name, estimate_rho_eps, find_chain,
                             long_distance, sample_cube_pairs, shadow_of,
                             shadow_sum_constants)


@pytest.fixture(scope="module")
def square_cov():
    dom = domain_from_name("square")
    return dom, build_whitney(dom, cw=1.0, max_generation=6)


@pytest.fixture(scope="module")
def slit_cov():
    dom = domain_from_name("slit-square")
    return dom, build_whitney(dom, cw=1.0, max_generation=6)


def test_trivial_chain(square_cov):
    _, cov = square_cov
    q = cov.interior[0]
    ch = find_chain(cov, q, q)
    assert len(ch) == 1
    assert ch.epsilon == pytest.approx(2.0)


def test_neighbor_chain_equal_sides(square_cov):
    _, cov = square_cov
    q = next(c for c in cov.interior
             if any(n.side == c.side for n in cov.neighbors(c)))
    s = next(n for n in cov.neighbors(q) if n.side == q.side)
    ch = find_chain(cov, q, s)
    assert len(ch) == 2
    assert ch.length == pytest.approx(long_distance(q, s))
    assert ch.epsilon == pytest.approx(1.0)


def test_chain_equivalences(square_cov):
    _, cov = square_cov
    pairs = sample_cube_pairs(cov, delta=0.6, n=40, seed=5)
    consts = []
    for q, s in pairs:
        ch = find_chain(cov, q, s)
        assert ch is not None
        d = long_distance(q, s)
        # lower comparison carries the diagonal constant sqrt(d)
        assert d <= np.sqrt(2.0) * ch.length + 1e-12
        assert ch.length <= d / ch.epsilon * (1 + 1e-9)
        for a, b in zip(ch.cubes, ch.cubes[1:]):
            assert a.touches(b)
        consts.append(ch.central.side / (ch.epsilon * d))
    assert min(consts) >= 1 / 8


def test_chain_lookup_error(square_cov):
    _, cov = square_cov
    bad = cov.exterior[0]
    with pytest.raises(CoveringError):
        find_chain(cov, bad, cov.interior[0])


def closest_left_of_slit(cov, y):
    cands = [q for q in cov.interior if q.lo[1] <= y < q.hi[1] and q.hi[0] <= 0.5]
    return max(cands, key=lambda q: (q.hi[0], -q.side))


def closest_right_of_slit(cov, y):
    cands = [q for q in cov.interior if q.lo[1] <= y < q.hi[1] and q.lo[0] >= 0.5]
    return min(cands, key=lambda q: (q.lo[0], q.side))


def test_slit_chain_detours(slit_cov, square_cov):
    dom, cov = slit_cov
    _, sqcov = square_cov

    y = 0.1  # deep below the slit tip at 0.5
    q_slit, s_slit = closest_left_of_slit(cov, y), closest_right_of_slit(cov, y)
    ch_slit = find_chain(cov, q_slit, s_slit)
    q_sq, s_sq = closest_left_of_slit(sqcov, y), closest_right_of_slit(sqcov, y)
    ch_sq = find_chain(sqcov, q_sq, s_sq)
    assert ch_slit is not None and ch_sq is not None
    # the detour multiplies the chain length and kills the certified eps
    assert ch_slit.length > 4 * ch_sq.length
    assert ch_slit.epsilon < ch_sq.epsilon / 3
    # every chain cube stays strictly on one side or above the tip
    tops = [c for c in ch_slit.cubes if c.hi[1] > 0.5]
    assert tops, "chain must climb above the slit tip"


def test_shadow_membership(square_cov):
    _, cov = square_cov
    p = cov.interior[10]
    sh = shadow_of(cov, p, rho=np.sqrt(2.0))
    assert any(c.key() == p.key() for c in sh.cubes)
    far = max(cov.interior, key=lambda c: np.linalg.norm(np.asarray(c.center) - p.center))
    if np.linalg.norm(np.asarray(far.center) - p.center) > np.sqrt(2) * p.side + far.side:
        assert all(c.key() != far.key() for c in sh.cubes)
    with pytest.raises(ValueError):
        shadow_of(cov, p, rho=0.5)


def test_shadow_sum_constants_stable():
    dom = domain_from_name("square")
    consts = []
    for gen in (5, 6):
        cov = build_whitney(dom, cw=1.0, max_generation=gen)
        consts.append(shadow_sum_constants(cov, rho=3.0, s=1.0))
    (neg5, vol5), (neg6, vol6) = consts
    assert 0.5 <= neg6 / neg5 <= 2.0
    assert 0.5 <= vol6 / vol5 <= 2.0


def test_rho_eps_estimate(square_cov):
    _, cov = square_cov
    pairs = sample_cube_pairs(cov, delta=0.5, n=20, seed=9)
    chains = [find_chain(cov, q, s) for q, s in pairs]
    rho = estimate_rho_eps(cov, chains)
    assert 1.0 <= rho < 50.0


def test_corkscrew_square_stable():
    dom = domain_from_name("square")
    eps = []
    for gen in (5, 6):
        cov = build_whitney(dom, cw=1.0, max_generation=gen)
        rep = check_corkscrew(dom, cov)
        assert rep.passed
        eps.append(rep.eps_empirical)
    assert 0.5 <= eps[0] / eps[1] <= 2.0


def test_corkscrew_slit_passes(slit_cov):
    dom, cov = slit_cov
    rep = check_corkscrew(dom, cov)
    assert rep.passed
    assert rep.eps_empirical > 0.05


def test_corkscrew_ratio_bounded(square_cov):
    dom, cov = square_cov
    rep = check_corkscrew(dom, cov)
    assert rep.eps_empirical <= 1.0  # a cube inside B(x, r) cannot beat l = 2r


def test_uniformity_square_vs_slit(square_cov, slit_cov):
    _, sq = square_cov
    _, sl = slit_cov
    pairs_sq = sample_cube_pairs(sq, delta=0.5, n=60, seed=3)
    rep_sq = check_uniformity(sq, pairs_sq)
    assert rep_sq.passed and rep_sq.eps_empirical > 0.05

    # mirrored pairs straddling the slit, deep below the tip
    pairs_sl = [(closest_left_of_slit(sl, y), closest_right_of_slit(sl, y))
                for y in (0.05, 0.1, 0.2, 0.3)]
    rep_sl = check_uniformity(sl, pairs_sl)
    assert rep_sl.passed
    assert rep_sl.eps_empirical < rep_sq.eps_empirical / 4
