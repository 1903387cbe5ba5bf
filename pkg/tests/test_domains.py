import numpy as np
import pytest

from tldiff.errors import InvalidDomainError
from tldiff.geometry import SdfDomain, domain_from_name, slit_square
from tldiff.geometry.domains import _boxes_to_segment_distance


@pytest.mark.parametrize("name", ["interval", "square", "l-shape", "slit-square", "disc"])
def test_membership_is_deterministic(name):
    dom = domain_from_name(name)
    rng = np.random.default_rng(3)
    pts = rng.uniform(dom.lo - 0.2, dom.hi + 0.2, size=(500, dom.dim))
    first = dom.contains(pts)
    for _ in range(3):
        assert np.array_equal(dom.contains(pts), first)


def test_square_membership_excludes_boundary():
    dom = domain_from_name("square")
    pts = np.array([[0.0, 0.5], [1.0, 0.5], [0.5, 0.0], [0.5, 1.0], [0.5, 0.5]])
    assert list(dom.contains(pts)) == [False, False, False, False, True]
    assert list(dom.in_closure(pts)) == [True] * 5


def test_slit_points_are_boundary():
    dom = slit_square(0.5)
    pts = np.array([[0.5, 0.25], [0.5, 0.5], [0.5, 0.75], [0.25, 0.25]])
    assert list(dom.contains(pts)) == [False, False, True, True]
    # the slit is invisible to the closure's complement
    assert dom.boundary_distance_points([[0.5, 0.25]], outer=True)[0] > 0.2
    assert dom.boundary_distance_points([[0.5, 0.25]], outer=False)[0] == pytest.approx(0.0)


def test_l_shape_notch():
    dom = domain_from_name("l-shape")
    pts = np.array([[0.75, 0.75], [0.25, 0.75], [0.75, 0.25], [0.5, 0.75]])
    assert list(dom.contains(pts)) == [False, True, True, False]


def test_box_segment_distance_exact_cases():
    # box [0,1]^2 vs vertical segment x=2, y in [0,1]: gap 1
    d = _boxes_to_segment_distance([[0, 0]], [[1, 1]], (2.0, 0.0), (2.0, 1.0))
    assert d[0] == pytest.approx(1.0, abs=1e-10)
    # diagonal segment: closest approach at the endpoint (2, 2)
    d = _boxes_to_segment_distance([[0, 0]], [[1, 1]], (2.0, 2.0), (3.0, 1.0))
    assert d[0] == pytest.approx(np.sqrt(2.0), abs=1e-6)
    # diagonal segment whose interior passes closest to the corner (1, 1):
    # perpendicular foot on the line x + y = 4
    d = _boxes_to_segment_distance([[0, 0]], [[1, 1]], (1.0, 3.0), (3.0, 1.0))
    assert d[0] == pytest.approx(np.sqrt(2.0), abs=1e-6)
    # intersecting segment: zero
    d = _boxes_to_segment_distance([[0, 0]], [[1, 1]], (-1.0, 0.5), (2.0, 0.5))
    assert d[0] == 0.0


def test_interval_distances():
    dom = domain_from_name("interval")
    d = dom.boundary_distance_boxes([[0.25]], [[0.5]])
    assert d[0] == pytest.approx(0.25)


def test_invalid_domain_raises():
    with pytest.raises(InvalidDomainError):
        domain_from_name("pentagon")
    sdf = SdfDomain.from_function(lambda p: -np.ones(p.shape[0]), (0, 0), (1, 1), n=17)
    with pytest.raises(InvalidDomainError):
        sdf.validate()


def test_sdf_domain_round_disc():
    fn = lambda p: 0.4 - np.linalg.norm(p - 0.5, axis=1)
    dom = SdfDomain.from_function(fn, (0, 0), (1, 1), n=129).validate()
    assert dom.contains([[0.5, 0.5]])[0]
    assert not dom.contains([[0.95, 0.95]])[0]
    d_in = dom.boundary_distance_boxes([[0.45, 0.45]], [[0.55, 0.55]])[0]
    assert 0.2 < d_in < 0.45
