import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arraymatch.mcis import (MCIS, DimensionError, MultidimensionalRange, mcis_difference,
                             mcis_intersect, mcis_union, range_indices)


def boxes(ndim, lo=-2, hi=6):
    interval = st.tuples(st.integers(lo, hi), st.integers(0, 3)).map(lambda t: (t[0], t[0] + t[1]))
    return st.lists(st.tuples(*[interval] * ndim), max_size=4)


def as_set(bs):
    out = set()
    for b in bs:
        out |= range_indices(MultidimensionalRange(b))
    return out


def test_range_enumeration():
    r = MultidimensionalRange.of((1, 3), (2, 4))
    assert range_indices(r) == {(i, j) for i in (1, 2, 3) for j in (2, 3, 4)}
    assert r.volume == 9


def test_range_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        MultidimensionalRange.of((3, 1))


def test_full_and_empty():
    assert MCIS.full((2, 3)).cardinality() == 6
    assert not MCIS.empty(2)
    assert MCIS.empty(1).cardinality() == 0


def test_canonical_form_makes_equal_sets_equal():
    a = MCIS(1, [[(1, 3)], [(4, 6)]])
    b = MCIS(1, [[(1, 6)]])
    assert a == b and hash(a) == hash(b)
    c = MCIS(2, [[(1, 2), (1, 1)], [(1, 2), (2, 2)]])
    assert c == MCIS(2, [[(1, 2), (1, 2)]])


def test_overlapping_input_is_disjointified():
    s = MCIS(2, [[(1, 3), (1, 3)], [(2, 4), (2, 4)]])
    assert s.cardinality() == 9 + 9 - 4
    bs = s.bounds
    for i, a in enumerate(bs):
        for b in bs[i + 1:]:
            assert not as_set([a]) & as_set([b])


def test_offset_may_go_below_one():
    s = MCIS(1, [[(1, 2)]]).offset((-3,))
    assert s.indices() == {(-2,), (-1,)}


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        MCIS(1, [[(1, 2)]]) | MCIS(2, [[(1, 2), (1, 2)]])
    with pytest.raises(DimensionError):
        MCIS(1, [[(1, 2)]]).contains((1, 1))


def test_pad_unpad():
    s = MCIS(1, [[(2, 4)]])
    p = s.pad(3)
    assert p.indices() == {(i, 1, 1) for i in (2, 3, 4)}
    assert p.unpad(1) == s
    t = MCIS(2, [[(1, 2), (1, 2)]])
    assert t.unpad(1) == MCIS(1, [[(1, 2)]])
    assert MCIS(2, [[(1, 2), (2, 3)]]).unpad(1) == MCIS.empty(1)


def test_json_round_trip():
    s = MCIS(2, [[(1, 3), (2, 4)], [(5, 5), (1, 1)]])
    assert MCIS.from_json(s.to_json()) == s
    assert MCIS.from_json([], 2) == MCIS.empty(2)
    with pytest.raises(ValueError):
        MCIS.from_json([])


def test_from_mask():
    import numpy as np
    m = np.array([[True, False], [True, True]])
    assert MCIS.from_mask(m).indices() == {(1, 1), (2, 1), (2, 2)}


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(boxes(n), boxes(n))))
def test_set_algebra_matches_python_sets(pair):
    a_boxes, b_boxes = pair
    n = len(a_boxes[0]) if a_boxes else (len(b_boxes[0]) if b_boxes else 1)
    a, b = MCIS(n, a_boxes), MCIS(n, b_boxes)
    sa, sb = as_set(a_boxes), as_set(b_boxes)
    assert mcis_union(a, b).indices() == sa | sb
    assert mcis_intersect(a, b).indices() == sa & sb
    assert mcis_difference(a, b).indices() == sa - sb
    assert a.cardinality() == len(sa)
    assert a.issubset(a | b)
    assert a.isdisjoint(b) == (not sa & sb)
    # structural equality follows set equality
    assert (a | b) == MCIS(n, list((a | b).bounds) + list(a.bounds))
