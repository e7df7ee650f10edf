from itertools import combinations
from math import comb

import pytest

from doubleforms import multiindex as mi
from doubleforms.errors import DimensionExceeded, InvalidIndex, InvalidSplit
from doubleforms.multiindex import MultiIndex, complement, shuffles

from conftest import perm_sign


def test_multiindex_validation():
    assert MultiIndex((1, 3), 4).indices == (1, 3)
    with pytest.raises(InvalidIndex):
        MultiIndex((2, 1), 4)
    with pytest.raises(InvalidIndex):
        MultiIndex((0, 1), 4)
    with pytest.raises(InvalidIndex):
        MultiIndex((1, 5), 4)
    with pytest.raises(DimensionExceeded):
        MultiIndex((1,), 11)


def test_position_round_trip():
    for n in range(1, 6):
        for p in range(n + 1):
            for pos in range(comb(n, p)):
                assert MultiIndex.from_position(n, p, pos).position == pos


@pytest.mark.parametrize("I, n, expected", [((1, 2), 4, ((3, 4), 1)), ((2, 3), 4, ((1, 4), 1)), ((), 3, ((1, 2, 3), 1))])
def test_complement_examples(I, n, expected):
    rest, sign = complement(MultiIndex(I, n))
    assert (rest.indices, sign) == expected


def test_complement_out_of_range():
    with pytest.raises(InvalidIndex):
        complement((1, 7), 4)


def test_complement_involution_and_signs():
    for n in range(0, 7):
        for p in range(n + 1):
            for I in combinations(range(1, n + 1), p):
                c, s1 = complement(I, n)
                back, s2 = complement(c)
                assert back.indices == I
                assert s1 == perm_sign(I + c.indices)
                # the two signs differ by the sign of swapping the blocks
                assert s1 * s2 == (-1) ** (p * (n - p))


def test_shuffle_examples():
    out = [(a.indices, b.indices, s) for a, b, s in shuffles((1, 2), 1)]
    assert out == [((1,), (2,), 1), ((2,), (1,), -1)]
    assert [(a.indices, b.indices, s) for a, b, s in shuffles((1, 2, 3), 0)] == [((), (1, 2, 3), 1)]
    assert [(a.indices, b.indices, s) for a, b, s in shuffles((1, 2, 3), 3)] == [((1, 2, 3), (), 1)]
    with pytest.raises(InvalidSplit):
        shuffles((1, 2), 3)


def test_shuffle_counts_and_signs():
    for n in range(1, 7):
        I = MultiIndex(tuple(range(1, n + 1)), n)
        for k in range(n + 1):
            out = shuffles(I, k)
            assert len(out) == comb(n, k)
            for a, b, s in out:
                assert perm_sign(a.indices + b.indices) == s
                assert tuple(sorted(a.indices + b.indices)) == I.indices


def test_tables_are_cached_and_readonly():
    first, second, sign = mi.shuffle_table(5, 2, 1)
    assert mi.shuffle_table(5, 2, 1)[0] is first
    with pytest.raises(ValueError):
        sign[0, 0] = 3.0
