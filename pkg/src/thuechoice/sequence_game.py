"""Random append-and-erase construction of square-free sequences over lists."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Sequence


@dataclass
class GameState:
    lists: tuple[tuple[Hashable, ...], ...]
    seq: list = field(default_factory=list)
    steps: int = 0
    erased: int = 0
    longest: int = 0
    history: list[int] | None = None

    @property
    def target(self) -> int:
        return len(self.lists)

    @property
    def done(self) -> bool:
        return len(self.seq) >= self.target


def square_suffix(seq: Sequence) -> int:
    """Smallest ``r`` such that the sequence ends with a square of half-length ``r``; 0 if none."""
    n = len(seq)
    last = seq[-1] if seq else None
    for r in range(1, n // 2 + 1):
        if seq[n - r - 1] == last and seq[n - 2 * r : n - r] == seq[n - r :]:
            return r
    return 0


def step(state: GameState, rng: random.Random) -> GameState:
    """Append a random symbol from the next list, then drop the second half of
    the shortest square the append created."""
    m = len(state.seq)
    if m >= state.target:
        raise ValueError("sequence already complete")
    state.seq.append(rng.choice(state.lists[m]))
    state.steps += 1
    r = square_suffix(state.seq)
    if r:
        del state.seq[-r:]
        state.erased += r
    state.longest = max(state.longest, len(state.seq))
    if state.history is not None:
        state.history.append(len(state.seq))
    return state


@dataclass(frozen=True)
class GameResult:
    completed: bool
    state: GameState

    @property
    def sequence(self) -> list:
        return list(self.state.seq)

    def to_json(self) -> dict:
        s = self.state
        return {
            "completed": self.completed,
            "length": len(s.seq),
            "target": s.target,
            "steps": s.steps,
            "erased": s.erased,
            "longest": s.longest,
            "sequence": [x if isinstance(x, (int, str)) else str(x) for x in s.seq],
        }


def run_game(
    lists: Sequence[Sequence[Hashable]],
    rng: random.Random,
    step_budget: int,
    record: bool = False,
) -> GameResult:
    if not lists or any(len(lst) == 0 for lst in lists):
        raise ValueError("lists must be nonempty")
    state = GameState(tuple(tuple(lst) for lst in lists), history=[] if record else None)
    while not state.done and state.steps < step_budget:
        step(state, rng)
    return GameResult(state.done, state)


def uniform_lists(n: int, size: int) -> list[tuple[int, ...]]:
    return [tuple(range(1, size + 1))] * n
