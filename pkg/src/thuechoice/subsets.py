"""Lexicographic ranking of fixed-size subsets of a sorted colour list.

Ranks are 1-based.  Subsets are ordered by their sorted position vectors in the
universe, which for a sorted universe is plain lexicographic order on colours.
The ``*_intersecting`` variants rank within the sub-collection of subsets that
meet a given colour set, keeping the same order.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence


class SubsetError(ValueError):
    pass


def _positions(universe: Sequence[int], subset: Iterable[int]) -> list[int]:
    index = {c: i for i, c in enumerate(universe)}
    try:
        return sorted(index[c] for c in subset)
    except KeyError as exc:
        raise SubsetError(f"colour {exc.args[0]} not in universe") from None


def rank_subset(universe: Sequence[int], subset: Iterable[int]) -> int:
    pos = _positions(universe, subset)
    n, k = len(universe), len(pos)
    rank, prev = 0, -1
    for i, p in enumerate(pos, start=1):
        for q in range(prev + 1, p):
            rank += comb(n - 1 - q, k - i)
        prev = p
    return rank + 1


def unrank_subset(universe: Sequence[int], index: int, k: int) -> frozenset[int]:
    n = len(universe)
    total = comb(n, k)
    if not 1 <= index <= total or k < 0:
        raise SubsetError(f"index {index} outside [1, {total}]")
    rest = index - 1
    out, q = [], 0
    for i in range(1, k + 1):
        while True:
            block = comb(n - 1 - q, k - i)
            if rest < block:
                break
            rest -= block
            q += 1
        out.append(universe[q])
        q += 1
    return frozenset(out)


def _suffix_free(n: int, hit: set[int]) -> list[int]:
    # free[q] = number of positions > q that are not hit; free[-1] stored at index n
    free = [0] * (n + 1)
    for q in range(n - 1, -1, -1):
        free[q] = free[q + 1] + (0 if q in hit else 1)
    return free


def count_intersecting(universe: Sequence[int], other: Iterable[int], k: int) -> int:
    hit = sum(1 for c in set(other) if c in set(universe))
    n = len(universe)
    return comb(n, k) - comb(n - hit, k)


def rank_intersecting(universe: Sequence[int], other: Iterable[int], subset: Iterable[int]) -> int:
    """Index of ``subset`` among the subsets of ``universe`` meeting ``other``."""
    pos = _positions(universe, subset)
    other = set(other)
    hit = {i for i, c in enumerate(universe) if c in other}
    if not hit.intersection(pos):
        raise SubsetError("subset does not meet the reference set")
    n, k = len(universe), len(pos)
    free = _suffix_free(n, hit)
    disjoint_before, prev = 0, -1
    for i, p in enumerate(pos, start=1):
        for q in range(prev + 1, p):
            if q not in hit:
                disjoint_before += comb(free[q + 1], k - i)
        if p in hit:
            break
        prev = p
    return rank_subset(universe, subset) - disjoint_before


def unrank_intersecting(universe: Sequence[int], other: Iterable[int], index: int, k: int) -> frozenset[int]:
    other = set(other)
    n = len(universe)
    hit = {i for i, c in enumerate(universe) if c in other}
    free = _suffix_free(n, hit)
    total = comb(n, k) - comb(len(universe) - len(hit), k)
    if not 1 <= index <= total:
        raise SubsetError(f"index {index} outside [1, {total}]")
    rest = index - 1
    out: list[int] = []
    clean = True  # prefix so far avoids the reference set
    q = 0
    for i in range(1, k + 1):
        while True:
            block = comb(n - 1 - q, k - i)
            if clean and q not in hit:
                block -= comb(free[q + 1], k - i)
            if rest < block:
                break
            rest -= block
            q += 1
        out.append(q)
        clean = clean and q not in hit
        q += 1
    return frozenset(universe[p] for p in out)
