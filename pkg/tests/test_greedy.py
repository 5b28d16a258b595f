from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from conftest import pw2_tree, random_lists, random_tree, trees
from thuechoice.decomposition import build_path_partition, level, tree_pathwidth_exact
from thuechoice.errors import InvariantBreach
from thuechoice.graph_core import Tree
from thuechoice.greedy import (
    EmptyChoice,
    VerificationFailure,
    best_partition,
    greedy_color,
    guards,
    pipeline,
)
from thuechoice.repetition import ListAssignment, brute_force_list_coloring, verify_nonrepetitive
from thuechoice.sublist_solver import bad_ascending_path


def walked_guards(pp, v):
    """Parent-side ends of class changes on the tree path from v to the root-path."""
    rp = set(pp.root_path)
    out = set()
    path = pp.host.path(v, pp.root_path[0])
    for a, b in zip(path, path[1:]):
        if a in rp:
            break
        if pp.class_of[a] != pp.class_of[b]:
            out.add(b)
    return out


def test_root_path_has_no_guards():
    t = Tree.path_graph(4)
    _, pd = tree_pathwidth_exact(t)
    pp = build_path_partition(t, pd, 2)
    for v in pp.root_path:
        assert guards(pp, v).guards == frozenset()


def test_level_one_vertex_has_its_attachment():
    t = Tree.star(3)
    _, pd = tree_pathwidth_exact(t)
    pp = best_partition(t, pd)
    for v in range(t.n):
        if level(pp, v) == 1:
            g = guards(pp, v).guards
            assert len(g) == 1 and next(iter(g)) in pp.root_path


@settings(max_examples=80, deadline=None)
@given(trees(max_n=14))
def test_guards_match_walk(t):
    _, pd = tree_pathwidth_exact(t)
    for u in range(t.n):
        pp = build_path_partition(t, pd, u)
        for v in range(t.n):
            g = guards(pp, v).guards
            assert len(g) == level(pp, v)
            assert g == walked_guards(pp, v)
            assert all(pp.levels[w] < pp.levels[v] for w in g)


@pytest.mark.parametrize("seed", range(6))
def test_guard_sizes_on_larger_trees(seed):
    rng = random.Random(seed)
    t = pw2_tree(rng, 150 + 10 * seed)
    _, pd = tree_pathwidth_exact(t, limit=400)
    pp = build_path_partition(t, pd, rng.randrange(t.n))
    for v in range(t.n):
        assert len(guards(pp, v).guards) == level(pp, v)


def test_single_vertex_takes_smallest():
    t = Tree.from_edges(1, [])
    pp = build_path_partition(t, tree_pathwidth_exact(t)[1], 0)
    assert greedy_color(t, pp, [frozenset({7, 3, 9})]) == {0: 3}


@settings(max_examples=60, deadline=None)
@given(trees(max_n=14))
def test_tight_sublists_never_run_out(t):
    # every sublist {1, ..., level + 1}: each guard can block at most one colour
    _, pd = tree_pathwidth_exact(t)
    pp = best_partition(t, pd)
    sub = [frozenset(range(1, level(pp, v) + 2)) for v in range(t.n)]
    phi = greedy_color(t, pp, sub)
    for v in range(t.n):
        assert phi[v] in sub[v]
        assert all(phi[g] != phi[v] for g in guards(pp, v).guards)


def test_too_small_sublists_run_out():
    t = Tree.star(3)
    _, pd = tree_pathwidth_exact(t)
    pp = best_partition(t, pd)
    assert pp.height >= 1
    with pytest.raises(EmptyChoice):
        greedy_color(t, pp, [frozenset({1})] * t.n)


def test_existence_of_path_colourings_from_four_lists():
    rng = random.Random(3)
    for _ in range(5):
        t = Tree.path_graph(12)
        phi = brute_force_list_coloring(t, random_lists(rng, 12, 4, 9))
        assert phi is not None and verify_nonrepetitive(t, phi)[0]


def test_pipeline_on_path():
    t = Tree.path_graph(15)
    lists = random_lists(random.Random(1), 15, 16, 60)
    res = pipeline(t, lists, (16, 4), random.Random(2))
    assert res.pathwidth == 1
    assert verify_nonrepetitive(t, res.coloring)[0]


def test_pipeline_on_star():
    t = Tree.star(12)
    lists = random_lists(random.Random(5), t.n, 64, 400)
    res = pipeline(t, lists, (64, 16, 5), random.Random(6))
    assert verify_nonrepetitive(t, res.coloring)[0]
    assert all(res.coloring[v] in lists[v] for v in range(t.n))
    assert res.chain[0] == 64 and res.chain[-1] == 5


@pytest.mark.parametrize("seed", range(5))
def test_pipeline_on_pathwidth_two_trees(seed):
    rng = random.Random(seed)
    t = pw2_tree(rng, rng.randint(12, 25))
    lists = random_lists(rng, t.n, 64, 400)
    res = pipeline(t, lists, (64, 16, 5), random.Random(seed))
    assert res.pathwidth <= 2
    assert bad_ascending_path(res.partition, res.sublists.sub) is None
    assert verify_nonrepetitive(t, res.coloring)[0]
    for v in range(t.n):
        assert res.coloring[v] in res.sublists[v] <= set(lists[v])


def test_pipeline_is_deterministic():
    rng = random.Random(9)
    t = random_tree(rng, 14)
    lists = random_lists(rng, t.n, 64, 400)
    a = pipeline(t, lists, (64, 16, 5), random.Random(4))
    b = pipeline(t, lists, (64, 16, 5), random.Random(4))
    assert a.coloring == b.coloring


def test_verification_failure_carries_state():
    err = VerificationFailure((0, 1), {"coloring": {}})
    assert isinstance(err, InvariantBreach)
    assert err.witness == (0, 1) and "coloring" in err.state


def test_pipeline_rejects_undefined_sublists():
    t = Tree.path_graph(2)
    pp = build_path_partition(t, tree_pathwidth_exact(t)[1], 0)
    with pytest.raises(ValueError):
        greedy_color(t, pp, [frozenset({1}), None])


def test_lists_json_feed_pipeline():
    t = Tree.path_graph(6)
    lists = ListAssignment.from_json(random_lists(random.Random(0), 6, 16, 60).to_json())
    assert verify_nonrepetitive(t, pipeline(t, lists, (16, 4), random.Random(0)).coloring)[0]
