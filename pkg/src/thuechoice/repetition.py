"""Repetitions, near repetitions, bad paths and brute-force list colouring."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .decomposition import PathPartition, classify_ascending
from .errors import BudgetExceeded
from .graph_core import PlaneArborescence, Tree, TreePath

Coloring = dict


@dataclass(frozen=True)
class NearRepetition:
    start: int
    r: int
    g: int = 0


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex colour lists, each kept sorted."""

    lists: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, lists: Iterable[Iterable[int]]) -> "ListAssignment":
        out = []
        for colors in lists:
            lst = tuple(sorted(set(colors)))
            if any(c < 1 for c in lst):
                raise ValueError("colours must be positive integers")
            out.append(lst)
        return cls(tuple(out))

    @classmethod
    def uniform(cls, n: int, colors: Iterable[int]) -> "ListAssignment":
        lst = tuple(sorted(set(colors)))
        return cls((lst,) * n)

    @property
    def size(self) -> int:
        sizes = {len(lst) for lst in self.lists}
        if len(sizes) != 1:
            raise ValueError(f"lists have mixed sizes {sorted(sizes)}")
        return sizes.pop()

    def __len__(self) -> int:
        return len(self.lists)

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.lists[v]

    def to_json(self) -> dict:
        return {str(v): list(lst) for v, lst in enumerate(self.lists)}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[int]]) -> "ListAssignment":
        n = len(data)
        return cls.of(data[str(v)] for v in range(n))

    @classmethod
    def read(cls, path: str | Path) -> "ListAssignment":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SublistAssignment:
    """Partial choice of ``ell``-sublists; ``None`` marks an undefined vertex."""

    sub: tuple[frozenset[int] | None, ...]
    ell: int

    def __getitem__(self, v: int) -> frozenset[int] | None:
        return self.sub[v]

    def __len__(self) -> int:
        return len(self.sub)

    def is_total(self) -> bool:
        return all(s is not None for s in self.sub)

    def check(self, lists: ListAssignment) -> None:
        for v, s in enumerate(self.sub):
            if s is None:
                continue
            if len(s) != self.ell or not s <= set(lists[v]):
                raise ValueError(f"sublist of vertex {v} is not an {self.ell}-subset of its list")

    def as_lists(self) -> ListAssignment:
        if not self.is_total():
            raise ValueError("undefined sublists")
        return ListAssignment.of(self.sub)  # type: ignore[arg-type]


def coloring_to_json(phi: Mapping[int, int]) -> dict:
    return {str(v): int(c) for v, c in sorted(phi.items())}


def coloring_from_json(data: Mapping[str, int]) -> Coloring:
    return {int(v): int(c) for v, c in data.items()}


# sequences


def find_repetition(seq: Sequence) -> NearRepetition | None:
    """First square block ``xx`` by start, then by half-length."""
    n = len(seq)
    for start in range(n):
        for r in range(1, (n - start) // 2 + 1):
            if seq[start : start + r] == seq[start + r : start + 2 * r]:
                return NearRepetition(start, r, 0)
    return None


def find_near_repetition(seq: Sequence, max_g: int) -> NearRepetition | None:
    """First block ``x y x`` with ``|y| <= max_g``, ordered by start, then r, then g."""
    seq = list(seq)
    n = len(seq)
    for start in range(n):
        for r in range(1, (n - start) // 2 + 1):
            head = seq[start : start + r]
            for g in range(0, min(max_g, n - start - 2 * r) + 1):
                if head == seq[start + r + g : start + 2 * r + g]:
                    return NearRepetition(start, r, g)
    return None


def is_square(seq: Sequence) -> bool:
    h, odd = divmod(len(seq), 2)
    return h > 0 and not odd and seq[:h] == seq[h:]


def verify_nonrepetitive(tree: Tree, phi: Mapping[int, int]) -> tuple[bool, TreePath | None]:
    """Check every path once per endpoint pair; a reversed square is still a square."""
    for u in range(tree.n):
        for v in range(u + 1, tree.n):
            path = tree.path(u, v)
            if len(path) % 2 == 0 and is_square([phi[x] for x in path]):
                return False, path
    return True, None


# bad paths


def _near_rep_shapes(colors: Sequence[int], on_anchor: Sequence[bool]):
    """(r, g) splits of the whole sequence as x y x meeting the gap condition."""
    p = len(colors)
    for r in range(1, p // 2 + 1):
        g = p - 2 * r
        if colors[:r] != colors[r + g :]:
            continue
        if g <= r or sum(on_anchor[r : r + g]) <= r:
            yield r, g


def is_phi_bad_ascending(pp: PathPartition, path: TreePath, phi: Mapping[int, int]) -> tuple[int, int] | None:
    asc = classify_ascending(pp, path)
    if not asc.ascending:
        raise ValueError("path is not ascending")
    oriented = asc.oriented
    base = set(asc.base)
    colors = [phi[v] for v in oriented]
    return next(_near_rep_shapes(colors, [v in base for v in oriented]), None)


def is_phi_bad_directed(
    arb: PlaneArborescence,
    path: TreePath,
    phi: Mapping[int, int],
    anchor: Iterable[int] | None = None,
) -> tuple[int, int] | None:
    """Bad-shape split of a directed path, the gap measured against ``anchor``
    (the rightmost path unless another root-anchored path is given)."""
    if not arb.is_directed_path(path):
        raise ValueError("path is not directed in the arborescence")
    marks = set(arb.rightmost if anchor is None else anchor)
    colors = [phi[v] for v in path]
    return next(_near_rep_shapes(colors, [v in marks for v in path]), None)


def exists_bad_coloring_shape(
    sub: SublistAssignment | Sequence[frozenset[int] | None],
    path: TreePath,
    r: int,
    anchor: Iterable[int],
) -> bool:
    """Whether some colouring from the sublists makes ``path`` bad with half-length ``r``.

    The path never repeats a vertex, so the aligned pairs can be coloured
    independently and the question is one of pairwise intersection.
    """
    g = len(path) - 2 * r
    if r < 1 or g < 0:
        return False
    lists = [sub[v] for v in path]
    if any(s is None for s in lists):
        raise ValueError("undefined sublist on path")
    marks = set(anchor)
    if g > r and sum(1 for v in path[r : r + g] if v in marks) > r:
        return False
    return all(lists[j] & lists[r + g + j] for j in range(r))


# brute force


def _tree_paths_from(tree: Tree, v: int, colored: set[int]) -> Iterable[list[int]]:
    stack = [[v]]
    while stack:
        p = stack.pop()
        yield p
        for w in tree.adjacency[p[-1]]:
            if w in colored and (len(p) < 2 or w != p[-2]):
                stack.append(p + [w])


def brute_force_list_coloring(
    tree: Tree,
    lists: ListAssignment,
    budget: int = 1_000_000,
) -> Coloring | None:
    """Some nonrepetitive colouring from the lists, or None when none exists.

    Vertices are coloured in BFS order from 0, so each new vertex is a leaf of the
    coloured part and only paths ending there need checking.  Raises
    ``BudgetExceeded`` after ``budget`` tentative assignments.
    """
    order = tree.bfs_order(0)
    phi: dict[int, int] = {}
    colored: set[int] = set()
    steps = 0

    def ok(v: int) -> bool:
        for p in _tree_paths_from(tree, v, colored):
            if len(p) % 2 == 0 and is_square([phi[x] for x in p]):
                return False
        return True

    def go(i: int) -> bool:
        nonlocal steps
        if i == len(order):
            return True
        v = order[i]
        colored.add(v)
        for c in lists[v]:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"brute-force colouring passed {budget} assignments")
            phi[v] = c
            if ok(v) and go(i + 1):
                return True
        colored.discard(v)
        del phi[v]
        return False

    return dict(phi) if go(0) else None


def graph_paths_through(adj: Sequence[Sequence[int]], v: int, alive: set[int]) -> Iterable[list[int]]:
    """Simple paths inside ``alive`` that contain ``v`` (each listed in both directions)."""
    halves: list[list[int]] = []
    stack = [[v]]
    while stack:
        p = stack.pop()
        halves.append(p)
        for w in adj[p[-1]]:
            if w in alive and w not in p:
                stack.append(p + [w])
    for a in halves:
        seen = set(a)
        for b in halves:
            if len(seen.intersection(b)) == 1:
                yield list(reversed(a)) + b[1:]


def brute_force_graph_coloring(
    adj: Sequence[Sequence[int]],
    lists: Sequence[Sequence[int]],
    budget: int = 200_000,
) -> Coloring | None:
    """As :func:`brute_force_list_coloring` for an arbitrary (tiny) graph."""
    n = len(adj)
    phi: dict[int, int] = {}
    alive: set[int] = set()
    steps = 0

    def go(v: int) -> bool:
        nonlocal steps
        if v == n:
            return True
        alive.add(v)
        for c in lists[v]:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"brute-force colouring passed {budget} assignments")
            phi[v] = c
            if all(
                not (len(p) % 2 == 0 and is_square([phi[x] for x in p]))
                for p in graph_paths_through(adj, v, alive)
            ) and go(v + 1):
                return True
        alive.discard(v)
        del phi[v]
        return False

    return dict(phi) if go(0) else None
