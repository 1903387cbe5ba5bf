import numpy as np
import pytest
from hypothesis import given, strategies as st

from tldiff.geometry import DyadicCube, Frame, long_distance
from tldiff.geometry.cubes import gap

FRAME = Frame((0.0, 0.0), 1.0)


def cube(gen, coords):
    return FRAME.cube(gen, coords)


coords2 = st.tuples(st.integers(-8, 8), st.integers(-8, 8))


@given(coords2, coords2, st.integers(0, 5))
def test_same_generation_disjoint_or_identical(c1, c2, gen):
    q, s = cube(gen, c1), cube(gen, c2)
    if c1 == c2:
        assert q == s
    else:
        # interiors are disjoint: the gap is zero only when faces touch
        overlap = np.minimum(q.hi, s.hi) - np.maximum(q.lo, s.lo)
        assert np.min(overlap) <= 1e-12


@given(coords2, st.integers(1, 6))
def test_parent_contains_child(c, gen):
    q = cube(gen, c)
    p = cube(gen - 1, q.parent_coords())
    assert np.all(p.lo <= q.lo + 1e-15) and np.all(q.hi <= p.hi + 1e-15)
    assert p.side == 2 * q.side


@given(coords2, st.integers(0, 6), st.floats(0.25, 8.0))
def test_dilation_scales_side(c, gen, r):
    q = cube(gen, c)
    lo, hi = q.dilated_bounds(r)
    assert np.allclose(hi - lo, r * q.side)


def test_long_distance_self():
    q = cube(3, (2, 5))
    assert long_distance(q, q) == pytest.approx(2 * q.side)


def test_long_distance_touching_neighbors():
    q, s = cube(3, (2, 5)), cube(3, (3, 5))
    assert gap(q, s) == 0.0
    assert long_distance(q, s) == pytest.approx(2 * q.side)


def test_long_distance_separated_matches_brute_force():
    # unit cubes far apart: D = 2 + gap with the coordinate-wise gap
    q, s = cube(0, (0, 0)), cube(0, (7, 3))
    expect_gap = np.hypot(6.0, 2.0)
    assert gap(q, s) == pytest.approx(expect_gap)
    assert long_distance(q, s) == pytest.approx(2.0 + expect_gap)

    # dense-sample oracle for the gap
    ts = np.linspace(0, 1, 21)
    pts_q = np.stack(np.meshgrid(q.lo[0] + ts, q.lo[1] + ts), -1).reshape(-1, 2)
    pts_s = np.stack(np.meshgrid(s.lo[0] + ts, s.lo[1] + ts), -1).reshape(-1, 2)
    brute = np.min(np.linalg.norm(pts_q[:, None] - pts_s[None, :], axis=-1))
    assert brute == pytest.approx(expect_gap, abs=1e-12)


def test_long_distance_symmetric_and_dominates_sides():
    rng = np.random.default_rng(7)
    for _ in range(50):
        g1, g2 = rng.integers(0, 5, size=2)
        q = cube(int(g1), tuple(rng.integers(-6, 6, size=2)))
        s = cube(int(g2), tuple(rng.integers(-6, 6, size=2)))
        assert long_distance(q, s) == pytest.approx(long_distance(s, q))
        assert long_distance(q, s) >= q.side + s.side - 1e-15


def test_touches_relation():
    assert cube(2, (0, 0)).touches(cube(2, (1, 1)))      # corner contact
    assert cube(2, (1, 0)).touches(cube(1, (1, 0)))      # across generations
    assert not cube(2, (0, 0)).touches(cube(2, (2, 0)))
