"""Path decompositions, exact pathwidth of small trees, and path-partitions.

A path-partition splits a tree into vertex-disjoint paths ("classes") arranged
as a rooted plane tree: the *shape*.  Every class path carries an orientation
(left to right), and every non-root class hangs off its parent class by a
single host edge whose endpoint inside the class is the class *center*.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .graph_core import PlaneArborescence, Tree, TreePath

PATHWIDTH_LIMIT = 64


class DecompositionError(ValueError):
    pass


class SizeLimitExceeded(BudgetExceeded):
    pass


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        return cls(tuple(frozenset(b) for b in bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def restrict(self, vertices: set[int] | frozenset[int]) -> "PathDecomposition":
        return PathDecomposition(tuple(b & vertices for b in self.bags if b & vertices))

    def dumps(self) -> str:
        return "".join(" ".join(map(str, sorted(b))) + "\n" for b in self.bags)

    @classmethod
    def loads(cls, text: str) -> "PathDecomposition":
        return cls.of([int(t) for t in line.split()] for line in text.splitlines() if line.strip())

    @classmethod
    def read(cls, path: str | Path) -> "PathDecomposition":
        return cls.loads(Path(path).read_text())


def check_decomposition(n: int, edges: Iterable[tuple[int, int]], bags: Sequence[frozenset[int]]) -> tuple[bool, int, str]:
    """Validate bags against an arbitrary graph; returns (ok, width, first problem)."""
    width = max((len(b) for b in bags), default=0) - 1
    where: dict[int, list[int]] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            if not 0 <= v < n:
                return False, width, f"vertex {v} out of range"
            where.setdefault(v, []).append(i)
    for v in range(n):
        idx = where.get(v)
        if not idx:
            return False, width, f"vertex {v} in no bag"
        if idx[-1] - idx[0] + 1 != len(idx):
            return False, width, f"vertex {v} has a gap"
    for u, v in edges:
        iu, iv = where[u], where[v]
        if iu[-1] < iv[0] or iv[-1] < iu[0]:
            return False, width, f"edge {u} {v} uncovered"
    return True, width, ""


def validate_path_decomposition(tree: Tree, pd: PathDecomposition) -> tuple[bool, int]:
    ok, width, _ = check_decomposition(tree.n, tree.edges, pd.bags)
    return ok, width


# exact pathwidth
#
# For a tree S with at least two vertices, pw(S) is the minimum over paths P of
# max(1, 1 + max pw(C)) with C ranging over the components of S - P.  It is
# enough to look at paths joining two leaves of S.


class _Pathwidth:
    def __init__(self, tree: Tree):
        self.tree = tree
        self.memo: dict[frozenset[int], tuple[int, TreePath, list[frozenset[int]]]] = {}

    def components(self, vs: frozenset[int], removed: set[int]) -> list[frozenset[int]]:
        adj = self.tree.adjacency
        alive = set(vs) - removed
        out = []
        for s in sorted(alive):
            if s not in alive:
                continue
            comp, stack = [s], [s]
            alive.discard(s)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in alive:
                        alive.discard(y)
                        comp.append(y)
                        stack.append(y)
            out.append(frozenset(comp))
        return out

    def solve(self, vs: frozenset[int]) -> int:
        hit = self.memo.get(vs)
        if hit is not None:
            return hit[0]
        if len(vs) == 1:
            self.memo[vs] = (0, (next(iter(vs)),), [])
            return 0
        adj = self.tree.adjacency
        degree = {v: sum(1 for w in adj[v] if w in vs) for v in vs}
        leaves = sorted(v for v in vs if degree[v] <= 1)
        inner = [v for v in vs if degree[v] > 1]
        # caterpillars are exactly the trees of pathwidth 1
        floor = 1 if all(sum(1 for w in adj[v] if w in vs and degree[w] > 1) <= 2 for v in inner) else 2
        pairs = [(a, b) for i, a in enumerate(leaves) for b in leaves[i + 1 :]]
        far = self.diameter_ends(vs)
        pairs.sort(key=lambda ab: ab != far)
        best: tuple[int, TreePath, list[frozenset[int]]] | None = None
        for a, b in pairs:
            path = self.tree.path(a, b)
            comps = sorted(self.components(vs, set(path)), key=len, reverse=True)
            value = 1
            for comp in comps:
                if best is not None and value >= best[0]:
                    break
                value = max(value, 1 + self.solve(comp))
            if best is None or value < best[0]:
                best = (value, path, comps)
                if value <= floor:
                    break
        assert best is not None
        self.memo[vs] = best
        return best[0]

    def diameter_ends(self, vs: frozenset[int]) -> tuple[int, int]:
        def farthest(s: int) -> int:
            order = self.tree.bfs_order(s, allowed=vs)
            return order[-1]

        a = farthest(min(vs))
        b = farthest(a)
        return (min(a, b), max(a, b))

    def layout(self, vs: frozenset[int]) -> list[frozenset[int]]:
        self.solve(vs)
        _, path, comps = self.memo[vs]
        if len(path) == 1 and not comps:
            return [frozenset(path)]
        on_path = {v: i for i, v in enumerate(path)}
        hanging: dict[int, list[frozenset[int]]] = {}
        for comp in comps:
            anchor = next(w for v in comp for w in self.tree.adjacency[v] if w in on_path)
            hanging.setdefault(anchor, []).append(comp)
        bags: list[frozenset[int]] = []
        for i, p in enumerate(path):
            for comp in sorted(hanging.get(p, []), key=min):
                bags.extend(bag | {p} for bag in self.layout(comp))
            if i + 1 < len(path):
                bags.append(frozenset((p, path[i + 1])))
        if not bags:
            bags.append(frozenset(path))
        return bags


def tree_pathwidth_exact(tree: Tree, limit: int = PATHWIDTH_LIMIT) -> tuple[int, PathDecomposition]:
    """Minimum-width path decomposition of a small tree (deterministic)."""
    if tree.n > limit:
        raise SizeLimitExceeded(f"tree has {tree.n} vertices, exact search is limited to {limit}")
    solver = _Pathwidth(tree)
    everything = frozenset(range(tree.n))
    k = solver.solve(everything)
    return k, PathDecomposition(tuple(solver.layout(everything)))


# path-partitions


@dataclass(frozen=True)
class PathPartition:
    host: Tree
    paths: tuple[TreePath, ...]
    shape: PlaneArborescence

    @property
    def root(self) -> int:
        return self.shape.root

    @property
    def root_path(self) -> TreePath:
        return self.paths[self.shape.root]

    @property
    def height(self) -> int:
        return max(self.shape.depth)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [-1] * self.host.n
        for x, p in enumerate(self.paths):
            for v in p:
                out[v] = x
        return tuple(out)

    @cached_property
    def position(self) -> tuple[int, ...]:
        out = [-1] * self.host.n
        for p in self.paths:
            for i, v in enumerate(p):
                out[v] = i
        return tuple(out)

    def level(self, v: int) -> int:
        return self.shape.depth[self.class_of[v]]

    @cached_property
    def levels(self) -> tuple[int, ...]:
        depth = self.shape.depth
        return tuple(depth[x] for x in self.class_of)

    @cached_property
    def links(self) -> tuple[tuple[int, int] | None, ...]:
        """For each class, the host edge (center, parent-side vertex) joining it to its parent."""
        out: list[tuple[int, int] | None] = [None] * len(self.paths)
        for x, p in enumerate(self.paths):
            par = self.shape.parent[x]
            if par is None:
                continue
            for v in p:
                for w in self.host.adjacency[v]:
                    if self.class_of[w] == par:
                        out[x] = (v, w)
        return tuple(out)

    def center(self, x: int) -> int | None:
        link = self.links[x]
        return None if link is None else link[0]

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "classes": {str(x): list(p) for x, p in enumerate(self.paths)},
            "shape_edges": [[x, c] for x in self.shape.dfs_order for c in self.shape.children[x]],
        }

    @classmethod
    def from_json(cls, host: Tree, data: dict) -> "PathPartition":
        m = len(data["classes"])
        paths = tuple(tuple(data["classes"][str(x)]) for x in range(m))
        children: list[list[int]] = [[] for _ in range(m)]
        for a, b in data["shape_edges"]:
            children[a].append(b)
        return cls(host, paths, PlaneArborescence(int(data["root"]), tuple(map(tuple, children))))


def check_path_partition(pp: PathPartition) -> list[str]:
    """Every violated path-partition invariant, as readable strings."""
    problems = []
    tree = pp.host
    seen: dict[int, int] = {}
    for x, p in enumerate(pp.paths):
        if not tree.is_path(p):
            problems.append(f"class {x} is not a path")
        for v in p:
            if v in seen:
                problems.append(f"vertex {v} in classes {seen[v]} and {x}")
            seen[v] = x
    if len(seen) != tree.n:
        problems.append("classes do not cover the tree")
        return problems
    joined = set()
    for u, v in tree.edges:
        a, b = seen[u], seen[v]
        if a != b:
            joined.add((min(a, b), max(a, b)))
    shape_edges = {
        (min(x, c), max(x, c)) for x in range(len(pp.paths)) for c in pp.shape.children[x]
    }
    if joined != shape_edges:
        problems.append("shape edges do not match host adjacency between classes")
    if len(pp.shape.dfs_order) != len(pp.paths):
        problems.append("shape is not a tree on all classes")
    return problems


class _PartitionBuilder:
    def __init__(self, tree: Tree):
        self.tree = tree
        self.paths: list[TreePath] = []
        self.children: list[list[int]] = []

    def new_class(self, path: TreePath) -> int:
        self.paths.append(tuple(path))
        self.children.append([])
        return len(self.paths) - 1

    def build(self, vs: frozenset[int], pd: PathDecomposition, u: int) -> int:
        tree = self.tree
        if len(vs) == 1:
            return self.new_class((u,))
        bags = pd.restrict(vs).bags
        if not bags or max(len(b) for b in bags) < 2:
            raise DecompositionError("decomposition does not cover the subtree")
        x, y = min(bags[0]), min(bags[-1])
        q1 = tree.path(x, u)
        on_q1 = {v: i for i, v in enumerate(q1)}
        to_q1 = tree.path(y, x)
        cut = next(i for i, v in enumerate(to_q1) if v in on_q1)
        z = to_q1[cut]
        q2 = to_q1[:cut]
        on_q2 = {v: i for i, v in enumerate(q2)}

        root = self.new_class(q1)
        hanging: dict[int, list[tuple[tuple, int]]] = {root: []}
        c2 = None
        if q2:
            c2 = self.new_class(q2)
            hanging[c2] = []
            hanging[root].append(((on_q1[z], 0, -1), c2))

        removed = set(q1) | set(q2)
        for comp in self.tree_components(vs, removed):
            d, a = next(
                (v, w) for v in comp for w in tree.adjacency[v] if w in removed
            )
            sub = self.build(frozenset(comp), pd, d)
            if a in on_q1:
                hanging[root].append(((on_q1[a], 1, d), sub))
            else:
                hanging[c2].append(((on_q2[a], 1, d), sub))
        for cls, items in hanging.items():
            self.children[cls] = [c for _, c in sorted(items)]
        return root

    def tree_components(self, vs: frozenset[int], removed: set[int]) -> list[list[int]]:
        adj = self.tree.adjacency
        alive = set(vs) - removed
        out = []
        for s in sorted(alive):
            if s not in alive:
                continue
            comp, stack = [s], [s]
            alive.discard(s)
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w in alive:
                        alive.discard(w)
                        comp.append(w)
                        stack.append(w)
            out.append(comp)
        return out


def build_path_partition(tree: Tree, pd: PathDecomposition, u: int) -> PathPartition:
    """Path-partition of height at most twice the width of ``pd`` with ``u`` in the root-path."""
    ok, _, msg = check_decomposition(tree.n, tree.edges, pd.bags)
    if not ok:
        raise DecompositionError(f"invalid path decomposition: {msg}")
    if not 0 <= u < tree.n:
        raise DecompositionError(f"vertex {u} not in tree")
    builder = _PartitionBuilder(tree)
    root = builder.build(frozenset(range(tree.n)), pd, u)
    shape = PlaneArborescence(root, tuple(tuple(c) for c in builder.children))
    return PathPartition(tree, tuple(builder.paths), shape)


def level(pp: PathPartition, v: int) -> int:
    return pp.level(v)


@dataclass(frozen=True)
class Ascent:
    ascending: bool
    source: int | None
    direction: str | None
    base: TreePath
    oriented: TreePath | None = None


def classify_ascending(pp: PathPartition, path: TreePath) -> Ascent:
    """Base, ascending flag, source and direction of a host path.

    ``oriented`` is the path listed from its source when it is ascending.
    """
    levels = [pp.levels[v] for v in path]
    low = min(levels)
    base_idx = [i for i, lv in enumerate(levels) if lv == low]
    base = tuple(path[i] for i in base_idx)
    first, last = base_idx[0] == 0, base_idx[-1] == len(path) - 1
    if not (first or last):
        return Ascent(False, None, None, base)
    if first and last:
        flip = len(path) > 1 and pp.position[path[-1]] < pp.position[path[0]]
    else:
        flip = last
    oriented = tuple(reversed(path)) if flip else tuple(path)
    src = oriented[0]
    direction = None
    if len(oriented) > 1:
        nxt = oriented[1]
        if pp.levels[nxt] != low:
            direction = "up"
        elif pp.position[nxt] > pp.position[src]:
            direction = "right"
        else:
            direction = "left"
    return Ascent(True, src, direction, tuple(v for v in oriented if pp.levels[v] == low), oriented)


def edge_kind(pp: PathPartition, e: tuple[int, int]) -> str:
    u, v = e
    if pp.class_of[u] == pp.class_of[v] and abs(pp.position[u] - pp.position[v]) == 1:
        return "horizontal"
    return "vertical"


def write_partition(pp: PathPartition, path: str | Path) -> None:
    Path(path).write_text(json.dumps(pp.to_json()))
