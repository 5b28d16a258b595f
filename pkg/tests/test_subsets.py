from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thuechoice.subsets import (
    SubsetError,
    count_intersecting,
    rank_intersecting,
    rank_subset,
    unrank_intersecting,
    unrank_subset,
)


def test_two_subsets_of_four():
    u = [1, 2, 3, 4]
    expected = [{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}]
    for i, s in enumerate(expected, start=1):
        assert rank_subset(u, s) == i
        assert unrank_subset(u, i, 2) == frozenset(s)


@pytest.mark.parametrize("n", range(1, 9))
def test_exhaustive_round_trip(n):
    u = list(range(10, 10 + 3 * n, 3))
    for k in range(0, min(n, 4) + 1):
        for i, combo in enumerate(combinations(u, k), start=1):
            assert rank_subset(u, combo) == i
            assert unrank_subset(u, i, k) == frozenset(combo)


def test_first_is_smallest():
    assert unrank_subset([3, 5, 8, 9], 1, 3) == {3, 5, 8}


def test_errors():
    with pytest.raises(SubsetError):
        unrank_subset([1, 2, 3], 4, 2)
    with pytest.raises(SubsetError):
        unrank_subset([1, 2, 3], 0, 2)
    with pytest.raises(SubsetError):
        rank_subset([1, 2, 3], {4})


@given(
    st.integers(1, 8).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.integers(1, n),
            st.sets(st.integers(0, 10), max_size=6),
        )
    )
)
def test_intersecting_collection_matches_enumeration(args):
    n, k, other = args
    u = list(range(n))
    members = [c for c in combinations(u, k) if set(c) & other]
    assert count_intersecting(u, other, k) == len(members)
    for i, c in enumerate(members, start=1):
        assert rank_intersecting(u, other, c) == i
        assert unrank_intersecting(u, other, i, k) == frozenset(c)


def test_intersecting_count_for_overlapping_lists():
    # five colours, reference pair inside the list: C(5,2) - C(3,2)
    assert count_intersecting([1, 2, 3, 4, 5], {1, 2}, 2) == 7


def test_rank_intersecting_rejects_disjoint():
    with pytest.raises(SubsetError):
        rank_intersecting([1, 2, 3, 4], {1}, {2, 3})
