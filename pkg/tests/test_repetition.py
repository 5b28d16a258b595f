from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_lists, random_tree
from thuechoice.errors import BudgetExceeded
from thuechoice.graph_core import PlaneArborescence, Tree
from thuechoice.repetition import (
    ListAssignment,
    NearRepetition,
    SublistAssignment,
    brute_force_graph_coloring,
    brute_force_list_coloring,
    exists_bad_coloring_shape,
    find_near_repetition,
    find_repetition,
    is_phi_bad_directed,
    is_square,
    verify_nonrepetitive,
)

words = st.lists(st.integers(0, 2), max_size=14)


def test_square_examples():
    assert find_repetition("abcabc") == NearRepetition(0, 3, 0)
    assert find_repetition("abcab") is None
    assert find_repetition("xabab") == NearRepetition(1, 2, 0)
    assert is_square("abab") and not is_square("aba") and not is_square("")


def test_near_repetition_examples():
    assert find_near_repetition("abxab", 1) == NearRepetition(0, 2, 1)
    assert find_near_repetition("abxab", 0) is None
    assert find_near_repetition("aa", 3) == NearRepetition(0, 1, 0)


def triple_loop(seq, max_g):
    n = len(seq)
    for start in range(n):
        for r in range(1, n):
            for g in range(max_g + 1):
                if start + 2 * r + g <= n and seq[start : start + r] == seq[start + r + g : start + 2 * r + g]:
                    return NearRepetition(start, r, g)
    return None


@given(words, st.integers(0, 4))
def test_near_repetition_matches_triple_loop(seq, max_g):
    assert find_near_repetition(seq, max_g) == triple_loop(seq, max_g)
    assert find_repetition(seq) == triple_loop(seq, 0)


@given(words)
def test_square_free_words_have_no_square_factor(seq):
    has = any(is_square(seq[i:j]) for i in range(len(seq)) for j in range(i + 2, len(seq) + 1))
    assert (find_repetition(seq) is not None) == has


def test_verify_finds_square_on_path():
    t = Tree.path_graph(4)
    ok, witness = verify_nonrepetitive(t, {0: 1, 1: 2, 2: 1, 3: 2})
    assert not ok and witness == (0, 1, 2, 3)
    assert verify_nonrepetitive(t, {0: 1, 1: 2, 2: 3, 3: 1}) == (True, None)


def test_two_colours_cover_paths_of_three_only():
    colors = [1, 2]
    assert brute_force_list_coloring(Tree.path_graph(3), ListAssignment.uniform(3, colors)) is not None
    assert brute_force_list_coloring(Tree.path_graph(4), ListAssignment.uniform(4, colors)) is None


def test_star_is_two_colourable():
    t = Tree.star(5)
    phi = brute_force_list_coloring(t, ListAssignment.uniform(t.n, [1, 2]))
    assert phi is not None and verify_nonrepetitive(t, phi)[0]


@pytest.mark.parametrize("seed", range(8))
def test_brute_force_respects_lists(seed):
    rng = random.Random(seed)
    t = random_tree(rng, 9)
    lists = random_lists(rng, t.n, 3, 5)
    phi = brute_force_list_coloring(t, lists)
    if phi is not None:
        assert all(phi[v] in lists[v] for v in range(t.n))
        assert verify_nonrepetitive(t, phi)[0]


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_list_coloring(Tree.path_graph(9), ListAssignment.uniform(9, [1, 2]), budget=5)


def test_graph_colouring_on_triangle_plus_tail():
    adj = [[1, 2], [0, 2], [0, 1, 3], [2]]
    phi = brute_force_graph_coloring(adj, [[1, 2, 3]] * 4)
    assert phi is not None
    # every simple path of even length must not be a square
    assert phi[0] != phi[1] != phi[2] != phi[0]
    assert brute_force_graph_coloring(adj, [[1, 2]] * 4) is None


def exhaustive_bad(sub, path, r, anchor):
    g = len(path) - 2 * r
    if g < 0 or r < 1:
        return False
    marks = set(anchor)
    if g > r and sum(v in marks for v in path[r : r + g]) > r:
        return False
    for colors in product(*(sorted(sub[v]) for v in path)):
        if colors[:r] == colors[r + g :]:
            return True
    return False


@settings(max_examples=150, deadline=None)
@given(
    st.integers(2, 6).flatmap(
        lambda p: st.tuples(
            st.lists(st.frozensets(st.integers(1, 4), min_size=2, max_size=2), min_size=p, max_size=p),
            st.integers(1, p // 2),
            st.sets(st.integers(0, p - 1)),
        )
    )
)
def test_bad_shape_matches_colouring_enumeration(args):
    sub, r, anchor = args
    path = tuple(range(len(sub)))
    assert exists_bad_coloring_shape(sub, path, r, anchor) == exhaustive_bad(sub, path, r, anchor)


def test_bad_shape_rejects_undefined():
    with pytest.raises(ValueError):
        exists_bad_coloring_shape([frozenset({1}), None], (0, 1), 1, ())


def test_directed_badness_uses_gap_condition():
    arb = PlaneArborescence.from_tree(Tree.path_graph(5), 0)
    phi = {0: 1, 1: 2, 2: 3, 3: 4, 4: 1}
    # x = (1), y = (2,3,4): three anchor vertices in the gap exceed r = 1
    assert is_phi_bad_directed(arb, (0, 1, 2, 3, 4), phi) is None
    assert is_phi_bad_directed(arb, (0, 1, 2, 3, 4), phi, anchor=(0,)) == (1, 3)
    with pytest.raises(ValueError):
        is_phi_bad_directed(arb, (4, 3), phi)


def test_sublist_assignment_checks():
    lists = ListAssignment.of([[1, 2, 3], [2, 3, 4]])
    good = SublistAssignment((frozenset({1, 2}), None), 2)
    good.check(lists)
    assert not good.is_total()
    with pytest.raises(ValueError):
        SublistAssignment((frozenset({1, 4}), None), 2).check(lists)
    total = SublistAssignment((frozenset({1, 2}), frozenset({3, 4})), 2)
    assert total.as_lists().lists == ((1, 2), (3, 4))


def test_list_assignment_json_round_trip():
    lists = ListAssignment.of([[3, 1], [2], [5, 4, 9]])
    assert ListAssignment.from_json(lists.to_json()) == lists
    with pytest.raises(ValueError):
        ListAssignment.of([[0, 1]])
    with pytest.raises(ValueError):
        _ = lists.size
