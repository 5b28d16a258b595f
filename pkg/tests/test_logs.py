from __future__ import annotations

import random
from itertools import product
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_lists, random_tree
from thuechoice.graph_core import PlaneArborescence, Tree
from thuechoice.logs import (
    LogDecodeError,
    MLog,
    audit_log_bounds,
    count_dprime_sequences,
    decode_dprime,
    decode_log,
    depth_differences,
    depths_of_dprime,
    dprime_of_depths,
    encode_dprime,
    gamma_bound,
    is_dprime_valid,
    record_mlog,
)
from thuechoice.repetition import ListAssignment
from thuechoice.sublist_solver import SolverConfig, SublistSolver, run_algorithm1


def test_dprime_example():
    diffs = (1, 1, 1, 1, 1, -2, -1, 1)
    coded = (1, 1, 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, 1)
    assert encode_dprime(diffs) == list(coded)
    assert decode_dprime(coded) == list(diffs)


def test_all_ascend_is_all_plus():
    assert dprime_of_depths(range(1, 8)) == [1] * 7


def test_rejects_illegal_input():
    with pytest.raises(ValueError):
        encode_dprime([2])
    with pytest.raises(ValueError):
        decode_dprime([-1, 1])
    with pytest.raises(ValueError):
        decode_dprime([1, 0])


@st.composite
def depth_walks(draw):
    depths, d = [], 0
    for _ in range(draw(st.integers(1, 30))):
        d = draw(st.integers(0, d + 1))
        depths.append(d)
    return depths


@given(depth_walks())
def test_dprime_round_trip(depths):
    coded = dprime_of_depths(depths)
    m = len(depths)
    assert coded.count(1) == m
    assert m <= len(coded) <= 2 * m
    assert is_dprime_valid(coded)
    assert depths_of_dprime(coded) == depths
    assert depth_differences(depths)[0] == depths[0]


@pytest.mark.parametrize("m", range(1, 6))
def test_walk_count_matches_enumeration(m):
    total = 0
    for length in range(m, 2 * m + 1):
        for seq in product((1, -1), repeat=length):
            if seq.count(1) == m and is_dprime_valid(seq):
                total += 1
    assert count_dprime_sequences(m) == total


def test_gamma_bound_example():
    assert gamma_bound(2, 5) == 16
    assert comb(5, 2) - comb(3, 2) == 7


def test_audit_reports_exact_count():
    log = MLog((0,), (1,), (0,), (None,))
    audit = audit_log_bounds(log, 2, 5)
    assert audit.ok
    assert audit.intersecting_count == 7 and audit.gamma_bound == 16
    assert audit.gamma_total == 0


def test_audit_flags_violations():
    log = MLog((1, 1), (1, None), (0, 5), (None, (1,)))
    audit = audit_log_bounds(log, 1, 1)
    assert not audit.ok
    assert any("b = 5" in v for v in audit.violations)
    assert not audit_log_bounds(MLog((2,), (1,), (0,), (None,)), 1, 1).ok


def forced_pair(m: int):
    arb = PlaneArborescence.from_tree(Tree.path_graph(2), 0)
    lists = ListAssignment.uniform(2, [3])
    return arb, lists, run_algorithm1(arb, lists, SolverConfig(1, 1, m, (1,) * m))


def test_one_iteration_log():
    arb, lists, res = forced_pair(1)
    log = record_mlog(res)
    assert log.depths == (1,) and log.on_anchor == (0,) and log.gammas == (None,)
    assert log.ranks == (1, None)
    assert decode_log(log, arb, lists, 1) == [1]


def test_hand_traced_square_retraction():
    arb, lists, res = forced_pair(2)
    log = record_mlog(res)
    # root sampled, child is problematic; then the child repeats the root
    assert log.depths == (1, 1)
    assert log.on_anchor == (0, 1)
    assert log.gammas == (None, (1,))
    # with r = 1 the final assignment is the one before the retraction
    assert log.ranks == (1, None)
    assert decode_log(log, arb, lists, 1) == [1, 1]


def test_success_log():
    arb = PlaneArborescence.from_tree(Tree.path_graph(1), 0)
    lists = ListAssignment.of([[1, 2, 3]])
    res = run_algorithm1(arb, lists, SolverConfig(1, 3, 2, (3, 1)))
    log = record_mlog(res)
    assert log == MLog((0,), (3,), (0,), (None,))
    assert decode_log(log, arb, lists, 1) == [3]


def long_spine_run(seed: int):
    """Mostly-path trees with singleton sublists, where longer blocks repeat."""
    rng = random.Random(seed)
    n = rng.randint(6, 16)
    t = Tree.from_edges(n, [(v - 1 if rng.random() < 0.8 else rng.randrange(v), v) for v in range(1, n)])
    arb = PlaneArborescence.from_tree(t, 0)
    size = rng.randint(2, 4)
    lists = random_lists(rng, n, size, size + 1)
    cfg = SolverConfig.seeded(1, size, 400, seed)
    return arb, lists, 1, size, None, SublistSolver(arb, lists, 1).run(cfg.random_input)


def fuzz_run(seed: int, max_m: int = 120):
    if seed % 4 == 1:
        return long_spine_run(seed)
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    arb = PlaneArborescence.from_tree(random_tree(rng, n), rng.randrange(n))
    size = rng.randint(2, 5)
    ell = rng.randint(1, size - 1)
    lists = random_lists(rng, n, size, size + rng.randint(0, 3))
    anchor = arb.ancestors(rng.randrange(n)) if seed % 3 == 0 else None
    cfg = SolverConfig.seeded(ell, size, rng.randint(1, max_m), seed)
    res = SublistSolver(arb, lists, ell, anchor).run(cfg.random_input)
    return arb, lists, ell, size, anchor, res


@pytest.mark.parametrize("seed", range(150))
def test_round_trip(seed):
    arb, lists, ell, size, anchor, res = fuzz_run(seed)
    log = record_mlog(res)
    assert MLog.loads(log.dumps()) == log
    audit = audit_log_bounds(log, ell, size, res)
    assert audit.ok, audit.violations
    for b, g in zip(log.on_anchor, log.gammas):
        if g is not None:
            assert 1 <= b <= 2 * len(g)
    assert decode_log(log, arb, lists, ell, anchor) == res.random_input


def test_retractions_cover_both_cases():
    rs = set()
    for seed in range(150):
        *_, res = fuzz_run(seed)
        rs.update(min(st.bad.r, 2) for st in res.trace if st.bad is not None)
    assert rs == {1, 2}


def test_distinct_inputs_give_distinct_logs():
    rng = random.Random(77)
    arb = PlaneArborescence.from_tree(random_tree(rng, 6), 0)
    lists = random_lists(rng, 6, 3, 4)
    seen: dict[str, tuple[int, ...]] = {}
    solver = SublistSolver(arb, lists, 1)
    for seed in range(300):
        cfg = SolverConfig.seeded(1, 3, 12, seed)
        res = solver.run(cfg.random_input)
        key = record_mlog(res).dumps()
        used = tuple(res.random_input)
        assert seen.setdefault(key, used) == used


def test_json_accepts_rank_list():
    log = MLog((1,), (2, None), (0,), (None,))
    data = log.to_json()
    data["S"] = [2, None]
    assert MLog.from_json(data) == log


def test_decode_rejects_corruption():
    arb, lists, res = forced_pair(2)
    log = record_mlog(res)
    with pytest.raises(LogDecodeError):
        decode_log(MLog(log.depths, log.ranks, (0, 0), log.gammas), arb, lists, 1)
    with pytest.raises(LogDecodeError):
        decode_log(MLog(log.depths, (1,), log.on_anchor, log.gammas), arb, lists, 1)
    with pytest.raises(LogDecodeError):
        decode_log(MLog((1, 1), (1, None), (0, 1), (None, (2,))), arb, lists, 1)
