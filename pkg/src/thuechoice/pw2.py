"""The pathwidth-2 family G(n, ell) whose list colourings must repeat.

Layers are numbered ``1..2n``.  Odd layer ``2t+1`` is a single vertex with list
``{t*ell+1, ..., t*ell+ell}``; even layers are independent sets with one vertex
per ``ell``-subset of ``[ell*n]``.  Consecutive layers are completely joined.

Vertex ids run layer by layer.  Even-layer vertex ``j`` (1-based) carries the
``j``-th ``ell``-subset in lexicographic order, so lists never need storing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterator, Mapping

import numpy as np

from .decomposition import PathDecomposition
from .errors import BudgetExceeded
from .repetition import Coloring, ListAssignment, brute_force_graph_coloring
from .subsets import unrank_subset

MATERIALIZE_LIMIT = 200_000


@dataclass(frozen=True)
class GnlGraph:
    n: int
    ell: int

    def __post_init__(self):
        if self.n < 1 or self.ell < 1:
            raise ValueError("need n >= 1 and ell >= 1")

    @cached_property
    def blob_size(self) -> int:
        return math.comb(self.ell * self.n, self.ell)

    @property
    def vertex_count(self) -> int:
        return self.n + self.n * self.blob_size

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """First vertex id of each layer; ``offsets[i]`` for layer ``i``."""
        out, pos = [0], 0
        for i in range(1, 2 * self.n + 1):
            out.append(pos)
            pos += 1 if i % 2 else self.blob_size
        return tuple(out)

    def layer_size(self, i: int) -> int:
        return 1 if i % 2 else self.blob_size

    def vertex(self, i: int, j: int = 1) -> int:
        if not 1 <= i <= 2 * self.n or not 1 <= j <= self.layer_size(i):
            raise IndexError(f"no vertex ({i}, {j})")
        return self.offsets[i] + j - 1

    def locate(self, v: int) -> tuple[int, int]:
        """(layer, 1-based position in layer) of a vertex id."""
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range")
        lo, hi = 1, 2 * self.n
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offsets[mid] <= v:
                lo = mid
            else:
                hi = mid - 1
        return lo, v - self.offsets[lo] + 1

    def layer(self, i: int) -> range:
        return range(self.offsets[i], self.offsets[i] + self.layer_size(i))

    def neighbors(self, v: int) -> Iterator[int]:
        i, _ = self.locate(v)
        for k in (i - 1, i + 1):
            if 1 <= k <= 2 * self.n:
                yield from self.layer(k)

    def odd_list(self, i: int) -> tuple[int, ...]:
        t = (i - 1) // 2
        return tuple(range(t * self.ell + 1, t * self.ell + self.ell + 1))

    @cached_property
    def universe(self) -> tuple[int, ...]:
        return tuple(range(1, self.ell * self.n + 1))

    def list_of(self, v: int) -> tuple[int, ...]:
        i, j = self.locate(v)
        if i % 2:
            return self.odd_list(i)
        return tuple(sorted(unrank_subset(self.universe, j, self.ell)))

    @cached_property
    def blob_lists(self) -> np.ndarray:
        """All even-layer lists as a ``(blob_size, ell)`` array in rank order."""
        if self.blob_size * self.ell > 50 * MATERIALIZE_LIMIT:
            raise BudgetExceeded(f"blob of {self.blob_size} lists is too large")
        return np.array(list(combinations(self.universe, self.ell)), dtype=np.int64).reshape(-1, self.ell)

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(1, 2 * self.n):
            for a in self.layer(i):
                for b in self.layer(i + 1):
                    yield a, b

    def adjacency(self, limit: int = MATERIALIZE_LIMIT) -> list[list[int]]:
        if self.vertex_count > limit:
            raise BudgetExceeded(f"{self.vertex_count} vertices exceed the materialisation limit {limit}")
        return [list(self.neighbors(v)) for v in range(self.vertex_count)]

    def lists(self, limit: int = MATERIALIZE_LIMIT) -> ListAssignment:
        if self.vertex_count > limit:
            raise BudgetExceeded(f"{self.vertex_count} vertices exceed the materialisation limit {limit}")
        out = []
        for i in range(1, 2 * self.n + 1):
            if i % 2:
                out.append(self.odd_list(i))
            else:
                out.extend(tuple(int(c) for c in row) for row in self.blob_lists)
        return ListAssignment.of(out)

    def decomposition(self, limit: int = MATERIALIZE_LIMIT) -> PathDecomposition:
        """Bags ``{v_(2i-1), v_(2i)^j, v_(2i+1)}`` over ``j``, then ``i``."""
        if self.vertex_count > limit:
            raise BudgetExceeded(f"{self.vertex_count} vertices exceed the materialisation limit {limit}")
        bags = []
        for i in range(1, self.n + 1):
            left = self.vertex(2 * i - 1)
            right = self.vertex(2 * i + 1) if i < self.n else None
            for w in self.layer(2 * i):
                bags.append({left, w} if right is None else {left, w, right})
        return PathDecomposition.of(bags)

    def manifest(self) -> dict:
        return {"n": self.n, "ell": self.ell, "blob_size": self.blob_size, "vertices": self.vertex_count}


def build_gnl(n: int, ell: int, limit: int = MATERIALIZE_LIMIT) -> tuple[GnlGraph, ListAssignment, PathDecomposition]:
    g = GnlGraph(n, ell)
    return g, g.lists(limit), g.decomposition(limit)


# colourings


@dataclass(frozen=True)
class GnlColoring:
    """Colours of the odd vertices (``odd[t]`` for layer ``2t+1``) and of every
    even-layer vertex (``blob[s, j-1]`` for layer ``2s+2``)."""

    odd: np.ndarray
    blob: np.ndarray

    @classmethod
    def random(cls, g: GnlGraph, rng: np.random.Generator) -> "GnlColoring":
        t = np.arange(g.n)
        odd = t * g.ell + 1 + rng.integers(0, g.ell, size=g.n)
        pick = rng.integers(0, g.ell, size=(g.n, g.blob_size))
        blob = np.take_along_axis(np.broadcast_to(g.blob_lists, (g.n,) + g.blob_lists.shape), pick[..., None], 2)[..., 0]
        return cls(odd, blob)

    @classmethod
    def avoiding(cls, g: GnlGraph, rng: np.random.Generator) -> "GnlColoring":
        """Each even layer leaves out ``ell - 1`` random colours where it can, so
        that membership conditions fail as often as the lists allow."""
        t = np.arange(g.n)
        odd = t * g.ell + 1 + rng.integers(0, g.ell, size=g.n)
        lists = g.blob_lists
        blob = np.empty((g.n, g.blob_size), dtype=np.int64)
        for s in range(g.n):
            omit = rng.choice(np.arange(1, g.ell * g.n + 1), size=g.ell - 1, replace=False)
            allowed = ~np.isin(lists, omit)
            # random allowed entry per row: random keys, disallowed pushed last
            keys = rng.random(lists.shape) + (~allowed)
            blob[s] = lists[np.arange(len(lists)), np.argmin(keys, axis=1)]
        return cls(odd, blob)

    @classmethod
    def forced(cls, g: GnlGraph) -> "GnlColoring":
        if g.ell != 1:
            raise ValueError("only singleton lists force the colouring")
        return cls(np.arange(1, g.n + 1), np.tile(g.blob_lists[:, 0], (g.n, 1)))

    @classmethod
    def from_coloring(cls, g: GnlGraph, phi: Mapping[int, int]) -> "GnlColoring":
        odd = np.array([phi[g.vertex(2 * t + 1)] for t in range(g.n)])
        blob = np.array([[phi[v] for v in g.layer(2 * s + 2)] for s in range(g.n)])
        return cls(odd, blob)

    def color(self, g: GnlGraph, v: int) -> int:
        i, j = g.locate(v)
        return int(self.odd[(i - 1) // 2] if i % 2 else self.blob[i // 2 - 1, j - 1])

    def to_coloring(self, g: GnlGraph) -> Coloring:
        return {v: self.color(g, v) for v in range(g.vertex_count)}


@dataclass(frozen=True)
class Witness:
    p: int
    q: int

    @property
    def k(self) -> int:
        return (abs(self.p - self.q) - 1) // 2


@dataclass(frozen=True)
class RepetitivePath:
    path: tuple[int, ...]
    colors: tuple[int, ...]
    start: int
    k: int


@dataclass(frozen=True)
class WitnessCensus:
    witnesses: frozenset[Witness]
    attribution: dict  # (a, k) -> smallest violating index i

    @property
    def count(self) -> int:
        return len(self.witnesses)


def _violations(g: GnlGraph, col: GnlColoring) -> np.ndarray:
    """``bad[i, k]``: the pair (i, i+2k+1) fails its membership condition (1-based i)."""
    n, top = g.n, g.ell * g.n
    present = np.zeros((n + 1, top + 1), dtype=bool)  # present[s, c]: colour c on layer 2s
    for s in range(n):
        present[s + 1, col.blob[s]] = True
    kmax = (n - 1) // 2
    bad = np.zeros((2 * n + 1, kmax + 1), dtype=bool)
    for k in range(kmax + 1):
        d = 2 * k + 1
        for i in range(1, 2 * n - d + 1):
            if i % 2:
                bad[i, k] = not present[(i + d) // 2, col.odd[(i - 1) // 2]]
            else:
                bad[i, k] = not present[i // 2, col.odd[(i + d - 1) // 2]]
    return bad


def find_repetition_or_witnesses(g: GnlGraph, col: GnlColoring | Mapping[int, int]) -> RepetitivePath | WitnessCensus:
    """Scan intervals ``[a, a+4k+1]`` by ``k`` then ``a``; the first one whose
    membership conditions all hold yields a repetitive path.  Otherwise every
    violating pair is returned, each interval attributed to its smallest index."""
    if not isinstance(col, GnlColoring):
        col = GnlColoring.from_coloring(g, col)
    n = g.n
    bad = _violations(g, col)
    attribution = {}
    for k in range((n - 1) // 2 + 1):
        d = 2 * k + 1
        for a in range(1, 2 * n - 4 * k - 1 + 1):
            window = bad[a : a + d, k]
            if not window.any():
                return _repetitive_path(g, col, a, k)
            attribution[(a, k)] = a + int(np.argmax(window))
    witnesses = set()
    for i, k in zip(*np.nonzero(bad)):
        i, k = int(i), int(k)
        j = i + 2 * k + 1
        witnesses.add(Witness(i, j) if i % 2 else Witness(j, i))
    return WitnessCensus(frozenset(witnesses), attribution)


def _repetitive_path(g: GnlGraph, col: GnlColoring, a: int, k: int) -> RepetitivePath:
    d = 2 * k + 1
    chosen: dict[int, int] = {}
    for i in range(a, a + d):
        if i % 2:
            c = int(col.odd[(i - 1) // 2])
            chosen[i] = g.vertex(i)
            even = i + d
        else:
            c = int(col.odd[(i + d - 1) // 2])
            chosen[i + d] = g.vertex(i + d)
            even = i
        row = col.blob[even // 2 - 1]
        j = int(np.flatnonzero(row == c)[0]) + 1
        chosen[even] = g.vertex(even, j)
    path = tuple(chosen[i] for i in range(a, a + 2 * d))
    return RepetitivePath(path, tuple(col.color(g, v) for v in path), a, k)


def witness_count(g: GnlGraph, col: GnlColoring) -> int:
    return int(_violations(g, col).sum())


# counting


@dataclass(frozen=True)
class WitnessBounds:
    n: int
    ell: int
    upper: int
    exact_sum: Fraction
    chain: tuple[Fraction | float, ...]
    n_ln_n_minus_3n: float
    contradiction: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ell": self.ell,
            "upper": self.upper,
            "exact_sum": str(self.exact_sum),
            "exact_sum_float": float(self.exact_sum),
            "chain": [float(x) for x in self.chain],
            "n_ln_n_minus_3n": self.n_ln_n_minus_3n,
            "contradiction": self.contradiction,
        }


def count_witness_bounds(n: int, ell: int) -> WitnessBounds:
    """The witness upper bound and the lower-bound chain, first three terms exact."""
    if n < 1:
        raise ValueError("n must be positive")
    kmax = (n - 1) // 2
    half = (n + 1) // 2
    exact = sum((Fraction(2 * n - 4 * k - 1, 2 * k + 1) for k in range(kmax + 1)), Fraction(0))
    shifted = sum((Fraction(n, k + 1) - 2 for k in range(kmax + 1)), Fraction(0))
    harmonic = n * sum((Fraction(1, k) for k in range(1, half + 1)), Fraction(0)) - 2 * half
    log_half = n * math.log(half) - (n + 1)
    log_n2 = n * math.log(n / 2) - (n + 1)
    final = n * math.log(n) - 3 * n
    upper = n * (ell - 1)
    return WitnessBounds(n, ell, upper, exact, (exact, shifted, harmonic, log_half, log_n2, final), final, exact > upper)


# certification


@dataclass(frozen=True)
class Verdict:
    certified: bool
    method: str
    repetition: RepetitivePath | None = None
    coloring: Coloring | None = None
    reason: str = ""


def certify_lower_bound_small(g: GnlGraph, budget: int = 200_000) -> Verdict:
    """Show that no colouring from the lists is nonrepetitive, if feasible."""
    if g.ell == 1:
        found = find_repetition_or_witnesses(g, GnlColoring.forced(g))
        if not isinstance(found, RepetitivePath):
            return Verdict(False, "forced", reason="forced colouring left no repetition")
        return Verdict(True, "forced", repetition=found)
    try:
        adj = g.adjacency(limit=64)
        lists = [g.list_of(v) for v in range(g.vertex_count)]
        phi = brute_force_graph_coloring(adj, lists, budget)
    except BudgetExceeded as exc:
        return Verdict(False, "exhaustive", reason=f"not certified at this scale: {exc}")
    if phi is None:
        return Verdict(True, "exhaustive")
    return Verdict(False, "exhaustive", coloring=phi, reason="a nonrepetitive colouring exists")
