from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thuechoice.repetition import find_repetition, is_square
from thuechoice.sequence_game import GameState, run_game, square_suffix, step, uniform_lists


class Fixed(random.Random):
    """Always picks the given symbol."""

    def __init__(self, symbol):
        super().__init__(0)
        self.symbol = symbol

    def choice(self, seq):
        assert self.symbol in seq
        return self.symbol


def test_erases_the_repeated_block():
    state = GameState((("a", "b", "c"),) * 6, list("abcb"))
    step(state, Fixed("c"))
    assert state.seq == list("abc")
    assert state.erased == 2


def test_first_symbol():
    state = GameState((("x",),))
    step(state, Fixed("x"))
    assert state.seq == ["x"] and state.done


def test_step_on_complete_sequence():
    state = GameState((("x",),), ["x"])
    with pytest.raises(ValueError):
        step(state, random.Random(0))


@given(st.lists(st.integers(0, 2), max_size=12))
def test_square_suffix_is_smallest(seq):
    r = square_suffix(seq)
    n = len(seq)
    ends = [q for q in range(1, n // 2 + 1) if is_square(seq[n - 2 * q :])]
    assert r == (min(ends) if ends else 0)


def test_single_symbol_lists_stall():
    res = run_game([("a",), ("a",)], random.Random(0), 50)
    assert not res.completed and res.state.longest == 1 and res.state.steps == 50


def test_two_symbols_never_reach_four():
    # no binary word of length four is square-free
    assert all(find_repetition(w) for w in product((1, 2), repeat=4))
    res = run_game(uniform_lists(10, 2), random.Random(1), 20_000)
    assert not res.completed and res.state.longest == 3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 5))
def test_square_free_after_every_step(seed, size):
    rng = random.Random(seed)
    lists = [tuple(rng.sample(range(1, 8), size)) for _ in range(40)]
    state = GameState(tuple(lists))
    for _ in range(400):
        if state.done:
            break
        before = len(state.seq)
        step(state, rng)
        assert find_repetition(state.seq) is None
        assert all(s in lists[i] for i, s in enumerate(state.seq))
        assert len(state.seq) <= before + 1


def test_four_symbols_complete():
    done = sum(run_game(uniform_lists(200, 4), random.Random(s), 100_000).completed for s in range(10))
    assert done == 10


def test_history_and_json():
    res = run_game(uniform_lists(30, 4), random.Random(2), 10_000, record=True)
    assert res.completed
    assert len(res.state.history) == res.state.steps
    data = res.to_json()
    assert data["length"] == 30 and data["sequence"] == res.sequence


def test_rejects_empty_lists():
    with pytest.raises(ValueError):
        run_game([(1,), ()], random.Random(0), 10)
