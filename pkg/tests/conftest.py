from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from thuechoice.graph_core import PlaneArborescence, Tree
from thuechoice.repetition import ListAssignment

ACCEPTANCE_LINES: list[str] = []


def random_tree(rng: random.Random, n: int) -> Tree:
    return Tree.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])


def pw2_tree(rng: random.Random, n: int) -> Tree:
    """Random tree of pathwidth at most 2: a spine with caterpillars hanging off it."""
    spine_len = max(1, rng.randint(n // 4, n // 2))
    edges = [(v - 1, v) for v in range(1, spine_len)]
    legs: list[list[int]] = []
    for v in range(spine_len, n):
        roll = rng.random()
        if not legs or roll < 0.3:
            edges.append((rng.randrange(spine_len), v))
            legs.append([v])
        elif roll < 0.65:
            leg = rng.choice(legs)
            edges.append((leg[-1], v))
            leg.append(v)
        else:
            edges.append((rng.choice(rng.choice(legs)), v))
    return Tree.from_edges(n, edges)


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 10) -> Tree:
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return Tree.from_edges(n, [(p, v) for v, p in enumerate(parents, start=1)])


@st.composite
def arborescences(draw, min_n: int = 1, max_n: int = 8) -> PlaneArborescence:
    t = draw(trees(min_n, max_n))
    root = draw(st.integers(0, t.n - 1))
    return PlaneArborescence.from_tree(t, root)


def random_lists(rng: random.Random, n: int, size: int, universe: int) -> ListAssignment:
    return ListAssignment.of(rng.sample(range(1, universe + 1), size) for _ in range(n))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
