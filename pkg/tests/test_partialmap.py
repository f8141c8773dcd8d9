from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qendo.partialmap import EMPTY_MAP, FinitePartialMap, MergeConflictError


def pm(*pairs):
    return FinitePartialMap.from_pairs([(F(a), F(b)) for a, b in pairs])


def test_sorting_and_text():
    m = pm((3, 5), (0, 1), (1, 2))
    assert m.domain() == (F(0), F(1), F(3))
    assert str(m) == "0 -> 1, 1 -> 2, 3 -> 5"
    assert FinitePartialMap.parse("0 -> 1, 1 -> 2, 3 -> 5") == m
    assert FinitePartialMap.parse("") == EMPTY_MAP


def test_partial_automorphism_check():
    assert pm((0, 0), (1, 5)).is_partial_automorphism()
    assert not pm((0, 5), (1, 5)).is_partial_automorphism()  # not injective
    assert not pm((0, 5), (1, 0)).is_partial_automorphism()  # order flipped
    assert EMPTY_MAP.is_partial_automorphism()


def test_inverse():
    m = pm((0, 1), (F(1, 2), F(3, 2)))
    assert m.inverse() == pm((1, 0), (F(3, 2), F(1, 2)))
    with pytest.raises(ValueError):
        pm((0, 1), (2, 1)).inverse()


def test_merge_ok():
    a = pm((0, 0), (2, 3))
    b = pm((1, 1))
    assert a.merge(b) == pm((0, 0), (1, 1), (2, 3))
    # overlapping but consistent
    assert a.merge(pm((0, 0))) == a


def test_merge_conflicts():
    with pytest.raises(MergeConflictError) as exc:
        pm((0, 0)).merge(pm((0, 1)))
    assert "0" in str(exc.value)
    with pytest.raises(MergeConflictError):
        pm((0, 5)).merge(pm((1, 4)))  # order violated


@given(st.lists(st.tuples(st.fractions(max_denominator=10),
                          st.fractions(max_denominator=10)), max_size=8))
def test_apply_agrees_with_graph(pairs):
    try:
        m = FinitePartialMap.from_pairs(pairs)
    except MergeConflictError:
        return
    for x, y in m.pairs:
        assert m.apply(x) == y
    assert m.apply(F(10 ** 9)) is None or F(10 ** 9) in m.domain()


@given(st.lists(st.fractions(max_denominator=10), min_size=1, max_size=8,
                unique=True),
       st.lists(st.fractions(max_denominator=10), min_size=1, max_size=8,
                unique=True))
def test_sorted_zip_is_automorphism(xs, ys):
    n = min(len(xs), len(ys))
    m = FinitePartialMap.from_pairs(zip(sorted(xs)[:n], sorted(ys)[:n]))
    assert m.is_partial_automorphism()
    assert m.inverse().inverse() == m
