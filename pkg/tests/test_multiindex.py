import numpy as np
import pytest
from hypothesis import given, strategies as st

from tldiff.calculus import MultiIndex, m_vector, multiindices, multiindices_upto


def test_m_vector_reference_values():
    assert m_vector((3, 2)) == (1, 1, 1, 2, 2)
    assert m_vector((4, 0, 1)) == (1, 1, 1, 1, 3)
    assert m_vector((0, 0)) == ()


@given(st.lists(st.integers(0, 5), min_size=1, max_size=4))
def test_m_vector_properties(ivec):
    out = m_vector(tuple(ivec))
    assert len(out) == sum(ivec)
    assert all(a <= b for a, b in zip(out, out[1:]))
    for j, count in enumerate(ivec, start=1):
        assert out.count(j) == count


def test_multiindex_algebra():
    a = MultiIndex((2, 1))
    assert a.order == 3
    assert a.factorial() == 2
    assert MultiIndex((1, 1)) <= a
    assert not (MultiIndex((3, 0)) <= a)
    assert (a + (0, 2)).exponents == (2, 3)
    assert (a - (1, 1)).exponents == (1, 0)
    with pytest.raises(ValueError):
        MultiIndex((-1, 0))


def test_monomial_evaluation():
    a = MultiIndex((2, 1))
    x = np.array([[2.0, 3.0], [1.0, -1.0]])
    assert np.allclose(a.monomial(x), [12.0, -1.0])


def test_multiindex_enumeration_order():
    assert multiindices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert multiindices(1, 3) == [(3,)]
    upto = multiindices_upto(2, 1)
    assert upto == [(0, 0), (1, 0), (0, 1)]
