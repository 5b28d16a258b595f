"""Randomised sublist thinning on a plane arborescence.

The solver walks the arborescence depth-first, left to right.  At the current
vertex it draws an ``ell``-sublist by rank from the injected random input.  If
that completes a bad path (a directed path starting on the anchor path whose
sublists admit a colouring shaped ``x y x`` with the gap condition), the second
``x`` block and everything above it is erased and the walk resumes from the
first erased vertex.  Otherwise each child subtree is completed
deterministically, in order, until one cannot be; that child is visited next.

Sublists are held internally as bitmasks over colours.  The anchor path is the
rightmost path unless the caller passes another path starting at the root.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InvariantBreach
from .decomposition import PathPartition, classify_ascending
from .graph_core import PlaneArborescence, Tree, TreePath, enumerate_paths
from .repetition import ListAssignment, SublistAssignment, exists_bad_coloring_shape
from .subsets import count_intersecting, rank_intersecting, rank_subset, unrank_subset

DEFAULT_ITERATION_CAP = 20_000
DEFAULT_SEARCH_BUDGET = 200_000


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def colors_of(mask: int) -> frozenset[int]:
    out, c = [], 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return frozenset(out)


@dataclass(frozen=True)
class SolverConfig:
    ell: int
    list_size: int
    max_iterations: int
    random_input: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.ell <= self.list_size:
            raise ValueError("need 1 <= ell <= list_size")
        if self.max_iterations < 1 or len(self.random_input) != self.max_iterations:
            raise ValueError("random input length must equal max_iterations")
        top = comb(self.list_size, self.ell)
        if any(not 1 <= r <= top for r in self.random_input):
            raise ValueError(f"random input entries must lie in [1, {top}]")

    @classmethod
    def seeded(cls, ell: int, list_size: int, max_iterations: int, seed: int) -> "SolverConfig":
        rng = random.Random(seed)
        top = comb(list_size, ell)
        return cls(ell, list_size, max_iterations, tuple(rng.randint(1, top) for _ in range(max_iterations)))

    @staticmethod
    def default_iterations(n: int, ell: int, list_size: int, cap: int = DEFAULT_ITERATION_CAP) -> int:
        return min(64 * n * comb(list_size, ell), cap)

    @classmethod
    def from_json(cls, data: dict) -> "SolverConfig":
        ell, size = int(data["ell"]), int(data["list_size"])
        if "random_input" in data:
            ri = tuple(int(x) for x in data["random_input"])
            return cls(ell, size, int(data.get("max_iterations", len(ri))), ri)
        return cls.seeded(ell, size, int(data["max_iterations"]), int(data["seed"]))

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "list_size": self.list_size,
            "max_iterations": self.max_iterations,
            "random_input": list(self.random_input),
        }


@dataclass(frozen=True)
class BadPath:
    vertices: TreePath
    r: int
    g: int


@dataclass(frozen=True)
class Step:
    """What one iteration of the main loop did."""

    sampled: int
    vertex: int
    bad: BadPath | None
    current: int
    depth: int
    on_anchor: int = 0
    gamma: tuple[int, ...] | None = None
    gamma_limits: tuple[int, ...] | None = None


@dataclass
class SolverState:
    current: int
    sub: list[int | None]
    iteration: int
    trace: list[Step] = field(default_factory=list)


@dataclass
class RunResult:
    success: bool
    state: SolverState
    lists: ListAssignment
    ell: int

    @property
    def trace(self) -> list[Step]:
        return self.state.trace

    @property
    def sublists(self) -> SublistAssignment:
        return SublistAssignment(tuple(None if m is None else colors_of(m) for m in self.state.sub), self.ell)

    @property
    def random_input(self) -> list[int]:
        return [s.sampled for s in self.state.trace]


class SublistSolver:
    """Fixed data of one solver instance: arborescence, lists, ell and anchor."""

    def __init__(
        self,
        arb: PlaneArborescence,
        lists: ListAssignment,
        ell: int,
        anchor: Sequence[int] | None = None,
        search_budget: int = DEFAULT_SEARCH_BUDGET,
    ):
        if len(lists) != arb.n:
            raise ValueError("one list per vertex required")
        self.arb = arb
        self.lists = lists
        self.ell = ell
        self.anchor = tuple(arb.rightmost if anchor is None else anchor)
        if not self.anchor or self.anchor[0] != arb.root or not arb.is_directed_path(self.anchor):
            raise ValueError("anchor must be a directed path starting at the root")
        self.on_anchor = frozenset(self.anchor)
        self.search_budget = search_budget
        self.chain = [tuple(arb.ancestors(v)) for v in range(arb.n)]
        # number of leading chain vertices that lie on the anchor
        self.prefix = []
        for v in range(arb.n):
            q = 0
            ch = self.chain[v]
            while q < len(ch) and q < len(self.anchor) and ch[q] == self.anchor[q]:
                q += 1
            self.prefix.append(q)
        self.list_masks = [[1 << c for c in lists[v]] for v in range(arb.n)]

    # sublist encoding

    def sample(self, v: int, rank: int) -> int:
        return mask_of(unrank_subset(self.lists[v], rank, self.ell))

    def rank(self, v: int, mask: int) -> int:
        return rank_subset(self.lists[v], colors_of(mask))

    # bad paths: every new bad path ends at the vertex just assigned

    def shapes(self, v: int):
        """(start index, r, g) in tie-break order for paths from the anchor to ``v``
        that satisfy the gap condition."""
        t = len(self.chain[v]) - 1
        q = self.prefix[v]
        for s in range(q):
            p = t - s + 1
            for r in range(1, p // 2 + 1):
                g = p - 2 * r
                if g > r and min(q, s + r + g) - (s + r) > r:
                    continue
                yield s, r, g

    def find_bad(self, v: int, sub: Sequence[int | None], mask: int) -> tuple[int, int, int] | None:
        ch = self.chain[v]
        masks = [sub[x] for x in ch[:-1]] + [mask]
        for s, r, g in self.shapes(v):
            if all(masks[s + j] & masks[s + r + g + j] for j in range(r)):
                return s, r, g
        return None

    def forbidden(self, v: int, masks: Sequence[int]) -> int:
        """Colours that would complete a bad path at ``v``; ``masks`` covers the
        strict ancestors of ``v``."""
        out = 0
        for s, r, g in self.shapes(v):
            if all(masks[s + j] & masks[s + r + g + j] for j in range(r - 1)):
                out |= masks[s + r - 1]
        return out

    # deterministic extension

    def extend(self, root: int, sub: Sequence[int | None]) -> dict[int, int] | None:
        """Sublists for the whole subtree at ``root`` keeping the assignment valid;
        lowest-ranked choices first, subtree by subtree in depth-first order."""
        masks = [sub[x] for x in self.chain[root][:-1]]
        if any(m is None for m in masks):
            raise InvariantBreach("extension below an undefined vertex")
        budget = [self.search_budget]
        return self._extend(root, masks, budget)  # type: ignore[arg-type]

    def _extend(self, v: int, masks: list[int], budget: list[int]) -> dict[int, int] | None:
        bad = self.forbidden(v, masks)
        allowed = [m for m in self.list_masks[v] if not m & bad]
        kids = self.arb.children[v]
        for combo in combinations(allowed, self.ell):
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceeded(f"extension search passed {self.search_budget} candidates")
            mask = 0
            for m in combo:
                mask |= m
            out = {v: mask}
            masks.append(mask)
            for c in kids:
                part = self._extend(c, masks, budget)
                if part is None:
                    break
                out.update(part)
            else:
                masks.pop()
                return out
            masks.pop()
        return None

    def sweep(self, u: int, sub: list[int | None]) -> int | None:
        """Extend the children of ``u`` in order; return the first that cannot be."""
        for c in self.arb.children[u]:
            part = self.extend(c, sub)
            if part is None:
                return c
            for w, m in part.items():
                sub[w] = m
        return None

    def erase(self, v: int, sub: list[int | None]) -> None:
        for w in self.arb.up_set(v):
            sub[w] = None

    # main loop

    def run(self, random_input: Sequence[int], check=None) -> RunResult:
        """Run for ``len(random_input)`` iterations or until success.

        ``check(state)`` is called after every iteration when given.
        """
        arb = self.arb
        state = SolverState(arb.root, [None] * arb.n, 0)
        sub = state.sub
        for i, r_i in enumerate(random_input, start=1):
            state.iteration = i
            u = state.current
            sub[u] = self.sample(u, r_i)
            hit = self.find_bad(u, sub, sub[u])
            if hit is not None:
                s, r, g = hit
                path = self.chain[u][s:]
                top = path[r + g]
                on_anchor = min(self.prefix[u], s + r + g) - s
                tail = path[r + g :]
                gamma = tuple(
                    rank_intersecting(self.lists[w], colors_of(sub[path[j]]), colors_of(sub[w]))
                    for j, w in enumerate(tail)
                )
                limits = tuple(
                    count_intersecting(self.lists[w], colors_of(sub[path[j]]), self.ell)
                    for j, w in enumerate(tail)
                )
                self.erase(top, sub)
                state.current = top
                state.trace.append(
                    Step(r_i, u, BadPath(path, r, g), top, arb.depth[top], on_anchor, gamma, limits)
                )
            else:
                nxt = self.sweep(u, sub)
                if nxt is None:
                    if i != 1 or u != arb.root:
                        raise InvariantBreach(f"completed at vertex {u} in iteration {i}")
                    state.trace.append(Step(r_i, u, None, u, arb.depth[u]))
                    if check is not None:
                        check(state)
                    return RunResult(True, state, self.lists, self.ell)
                state.current = nxt
                state.trace.append(Step(r_i, u, None, nxt, arb.depth[nxt]))
            if check is not None:
                check(state)
        return RunResult(False, state, self.lists, self.ell)


def run_algorithm1(
    arb: PlaneArborescence,
    lists: ListAssignment,
    config: SolverConfig,
    anchor: Sequence[int] | None = None,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> RunResult:
    if lists.size != config.list_size:
        raise ValueError(f"lists have size {lists.size}, config says {config.list_size}")
    solver = SublistSolver(arb, lists, config.ell, anchor, search_budget)
    return solver.run(config.random_input)


def find_bad_path(
    arb: PlaneArborescence,
    sub: SublistAssignment,
    u: int,
    anchor: Sequence[int] | None = None,
) -> BadPath | None:
    """First bad path ending at ``u`` over defined sublists (start, then r, then g)."""
    anchor = tuple(arb.rightmost if anchor is None else anchor)
    on = set(anchor)
    chain = arb.ancestors(u)
    if sub[u] is None:
        raise ValueError("sublist of u is undefined")
    for s, a in enumerate(chain):
        if a not in on or any(anchor[i] != chain[i] for i in range(s + 1)):
            break
        path = tuple(chain[s:])
        if any(sub[v] is None for v in path):
            continue
        for r in range(1, len(path) // 2 + 1):
            if exists_bad_coloring_shape(sub, path, r, on):
                return BadPath(path, r, len(path) - 2 * r)
    return None


def find_valid_extension(
    arb: PlaneArborescence,
    sub: SublistAssignment,
    subtree_root: int,
    lists: ListAssignment,
    ell: int,
    anchor: Sequence[int] | None = None,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> dict[int, frozenset[int]] | None:
    solver = SublistSolver(arb, lists, ell, anchor, search_budget)
    masks = [None if s is None else mask_of(s) for s in sub.sub]
    part = solver.extend(subtree_root, masks)
    return None if part is None else {v: colors_of(m) for v, m in part.items()}


def first_bad_directed_path(
    arb: PlaneArborescence,
    sub: Sequence[frozenset[int] | None],
    anchor: Sequence[int] | None = None,
) -> BadPath | None:
    """Any fully-assigned directed path from the anchor admitting a bad colouring.
    Independent of the solver's incremental bookkeeping; used as a checker."""
    on = set(arb.rightmost if anchor is None else anchor)
    for path in arb.directed_paths():
        if path[0] not in on or any(sub[v] is None for v in path):
            continue
        for r in range(1, len(path) // 2 + 1):
            if exists_bad_coloring_shape(sub, path, r, on):
                return BadPath(path, r, len(path) - 2 * r)
    return None


def dump_trace(result: RunResult) -> str:
    """Line-delimited JSON, one record per iteration."""
    lines = []
    for i, st in enumerate(result.trace, start=1):
        rec = {"i": i, "sampled": st.sampled, "vertex": st.vertex, "current": st.current, "depth": st.depth}
        if st.bad is not None:
            rec["bad"] = {"path": list(st.bad.vertices), "r": st.bad.r, "g": st.bad.g}
            rec["b"] = st.on_anchor
            rec["gamma"] = list(st.gamma or ())
        lines.append(json.dumps(rec))
    return "\n".join(lines) + ("\n" if lines else "")


# two-pass thinning over a path-partition


class ThinningFailed(BudgetExceeded):
    def __init__(self, stage: str, attempts: int):
        super().__init__(f"{stage}: no success in {attempts} attempts")
        self.stage = stage
        self.attempts = attempts


def paper_f(ell: int, h: int) -> int:
    for _ in range(h):
        ell = 32 * (32 * ell**3 + 1) ** 3 + 1
    return 32 * ell**3 + 1


def paper_b(k: int) -> int:
    return paper_f(2 * k + 1, 2 * k)


def paper_schedule(ell: int, h: int) -> list[int]:
    """Size chain for a partition of height ``h`` with the constants of the
    existence proof: list size, then per level the target and the middle size."""
    targets = [ell]
    for _ in range(h):
        targets.append(32 * (32 * targets[-1] ** 3 + 1) ** 3 + 1)
    chain = [32 * targets[h] ** 3 + 1, targets[h]]
    for d in range(h - 1, -1, -1):
        chain += [32 * targets[d] ** 3 + 1, targets[d]]
    return chain


def expand_schedule(schedule: Sequence[int], height: int) -> list[int]:
    """Stretch a decreasing size schedule to the ``2 * height + 2`` sizes one
    thinning needs (list size, then one size per pass).

    A schedule of the right length is used as is.  Otherwise sizes are
    interpolated geometrically between the given waypoints, spread evenly.
    """
    sched = [int(s) for s in schedule]
    if len(sched) < 2 or any(a <= b for a, b in zip(sched, sched[1:])) or sched[-1] < 1:
        raise ValueError("schedule must be strictly decreasing, end at >= 1 and have >= 2 sizes")
    need = 2 * height + 2
    if len(sched) == need:
        return sched
    m = len(sched) - 1
    out = []
    for j in range(need):
        t = j * m / (need - 1)
        a = min(int(t), m - 1)
        frac = t - a
        out.append(round(math.exp((1 - frac) * math.log(sched[a]) + frac * math.log(sched[a + 1]))))
    out[0], out[-1] = sched[0], sched[-1]
    for j in range(need - 2, 0, -1):
        out[j] = max(out[j], out[j + 1] + 1)
    if out[1] >= out[0]:
        raise ValueError(f"schedule {sched} is too short to give {need} distinct sizes")
    return out


def component_arborescences(tree: Tree, vertices: Sequence[int], root_path: TreePath):
    """(A, A', anchor in A, anchor in A', label map) for the subtree on ``vertices``.

    A is rooted at the first root-path vertex and A' at the last; in both the
    root-path is a prefix of the rightmost path.
    """
    sub, old = tree.induced(vertices)
    index = {v: i for i, v in enumerate(old)}
    rp = [index[v] for v in root_path]
    a = PlaneArborescence.from_tree(sub, rp[0], {x: y for x, y in zip(rp, rp[1:])})
    rev = rp[::-1]
    a2 = PlaneArborescence.from_tree(sub, rev[0], {x: y for x, y in zip(rev, rev[1:])})
    return a, a2, tuple(rp), tuple(rev), old


def to_arborescences(tree: Tree, pp: PathPartition) -> tuple[PlaneArborescence, PlaneArborescence]:
    a, a2, _, _, old = component_arborescences(tree, list(range(tree.n)), pp.root_path)
    if old != list(range(tree.n)):
        raise InvariantBreach("relabelling of the whole tree is not the identity")
    return a, a2


@dataclass
class ThinReport:
    sub: SublistAssignment
    chain: list[int]
    passes: int = 0
    attempts: int = 0


def thin_lists(
    tree: Tree,
    pp: PathPartition,
    lists: ListAssignment,
    schedule: Sequence[int],
    rng: random.Random,
    retries: int = 16,
    max_iterations: int = 4,
    anchor: str = "root-path",
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    report: ThinReport | None = None,
) -> SublistAssignment:
    """Nested sublists of size ``schedule[-1]`` such that no colouring from them
    makes an ascending path bad.

    Each class is handled after the classes above it: its component gets one
    solver pass if it is a single path, otherwise the classes above are thinned
    first and two passes follow, one rooted at each end of the class path.
    ``anchor`` selects the path whose vertices start checked paths and count
    against the gap: the class path itself, or the whole rightmost path.
    """
    if anchor not in ("root-path", "rightmost"):
        raise ValueError("anchor must be 'root-path' or 'rightmost'")
    height = pp.height
    chain = expand_schedule(schedule, height)
    if lists.size < chain[0]:
        raise ValueError(f"lists of size {lists.size} are smaller than the schedule start {chain[0]}")
    # sizes[d] is the target at level d; mids[d] the size between the two passes
    sizes = {height: chain[1]}
    mids = {}
    for step, d in enumerate(range(height - 1, -1, -1)):
        mids[d] = chain[2 + 2 * step]
        sizes[d] = chain[3 + 2 * step]
    current: list[frozenset[int]] = [frozenset(unrank_subset(lists[v], 1, chain[0])) for v in range(tree.n)]
    shape = pp.shape
    members = {}
    for x in reversed(shape.dfs_order):
        members[x] = list(pp.paths[x]) + [v for c in shape.children[x] for v in members[c]]
    stats = report or ThinReport(SublistAssignment((), 0), chain)
    stats.chain = chain

    def one_pass(arb, anchor_path, old, target, stage):
        size = len(current[old[0]])
        sub_lists = ListAssignment.of(current[v] for v in old)
        anc = anchor_path if anchor == "root-path" else None
        solver = SublistSolver(arb, sub_lists, target, anc, search_budget)
        for attempt in range(1, retries + 1):
            stats.attempts += 1
            cfg = SolverConfig.seeded(target, size, max_iterations, rng.getrandbits(64))
            try:
                res = solver.run(cfg.random_input)
            except BudgetExceeded:
                continue
            if res.success:
                stats.passes += 1
                for i, v in enumerate(old):
                    current[v] = colors_of(res.state.sub[i])
                return
        raise ThinningFailed(stage, retries)

    def visit(x: int, target: int) -> None:
        d = shape.depth[x]
        kids = shape.children[x]
        a, a2, rp, rev, old = component_arborescences(tree, members[x], pp.paths[x])
        if not kids:
            one_pass(a, rp, old, target, f"class {x} (single pass)")
            return
        for c in kids:
            visit(c, sizes[d + 1])
        for v in pp.paths[x]:
            current[v] = frozenset(sorted(current[v])[: sizes[d + 1]])
        one_pass(a, rp, old, mids[d], f"class {x} (first pass)")
        one_pass(a2, rev, old, target, f"class {x} (second pass)")

    visit(shape.root, sizes[0])
    out = SublistAssignment(tuple(current), chain[-1])
    stats.sub = out
    return out


def bad_ascending_path(pp: PathPartition, sub: Sequence[frozenset[int] | None]) -> tuple[TreePath, int] | None:
    """An ascending path and half-length admitting a bad colouring from ``sub``."""
    for path in enumerate_paths(pp.host):
        asc = classify_ascending(pp, path)
        if not asc.ascending:
            continue
        oriented = asc.oriented
        base = set(asc.base)
        for r in range(1, len(oriented) // 2 + 1):
            if exists_bad_coloring_shape(sub, oriented, r, base):
                return oriented, r
    return None
