"""Trees, paths and plane arborescences.

Vertices are dense integers ``0..n-1``.  A path is a plain tuple of vertex
ids; consecutive entries are adjacent and no vertex repeats.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

TreePath = tuple


class TreeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Tree:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tree":
        if n < 1:
            raise TreeFormatError("a tree needs at least one vertex")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise TreeFormatError(f"bad edge {u} {v}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeFormatError(f"repeated edge {u} {v}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != n - 1:
            raise TreeFormatError(f"expected {n - 1} edges, got {count}")
        tree = cls(n, tuple(tuple(a) for a in adj))
        if len(tree.bfs_order(0)) != n:
            raise TreeFormatError("edges do not form a connected graph")
        return tree

    @classmethod
    def path_graph(cls, n: int) -> "Tree":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (u, v) for u in range(self.n) for v in self.adjacency[u] if u < v
        )

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges in input order (each reported from its first endpoint seen)."""
        out, seen = [], set()
        for u in range(self.n):
            for v in self.adjacency[u]:
                key = (min(u, v), max(u, v))
                if key not in seen:
                    seen.add(key)
                    out.append(key)
        return out

    def bfs_order(self, root: int, allowed: frozenset[int] | set[int] | None = None) -> list[int]:
        order = [root]
        mark = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if y not in mark and (allowed is None or y in allowed):
                    mark.add(y)
                    order.append(y)
                    queue.append(y)
        return order

    def parents_from(self, root: int) -> list[int]:
        """Parent pointers of the tree rooted at ``root`` (root maps to -1)."""
        parent = [-1] * self.n
        mark = [False] * self.n
        mark[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if not mark[y]:
                    mark[y] = True
                    parent[y] = x
                    queue.append(y)
        return parent

    @cached_property
    def _parent_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.parents_from(r)) for r in range(self.n))

    def path(self, u: int, v: int) -> TreePath:
        """The unique path from ``u`` to ``v``."""
        parent = self._parent_table[v]
        out = [u]
        while out[-1] != v:
            out.append(parent[out[-1]])
        return tuple(out)

    def distance(self, u: int, v: int) -> int:
        return len(self.path(u, v)) - 1

    def components_without(self, removed: Iterable[int]) -> list[list[int]]:
        """Components of the forest left after deleting ``removed``, each in BFS order
        from its smallest vertex; components are sorted by smallest vertex."""
        alive = set(range(self.n)).difference(removed)
        comps = []
        for s in range(self.n):
            if s not in alive:
                continue
            comp = self.bfs_order(s, allowed=alive)
            alive.difference_update(comp)
            comps.append(comp)
        return comps

    def is_path(self, seq: Sequence[int]) -> bool:
        if not seq or len(set(seq)) != len(seq):
            return False
        return all(b in self.adjacency[a] for a, b in zip(seq, seq[1:]))

    def induced(self, vertices: Sequence[int]) -> tuple["Tree", list[int]]:
        """Induced subtree relabelled to ``0..m-1`` plus the label map (new -> old)."""
        old = list(vertices)
        index = {v: i for i, v in enumerate(old)}
        edges = [
            (index[u], index[v])
            for u in old
            for v in self.adjacency[u]
            if v in index and index[u] < index[v]
        ]
        return Tree.from_edges(len(old), edges), old

    # text format: "n" then n-1 lines "u v"
    def dumps(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edge_list()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Tree":
        tokens = text.split()
        if not tokens:
            raise TreeFormatError("empty tree file")
        try:
            nums = [int(t) for t in tokens]
        except ValueError as exc:
            raise TreeFormatError(str(exc)) from None
        n, rest = nums[0], nums[1:]
        if len(rest) != 2 * (n - 1):
            raise TreeFormatError(f"expected {n - 1} edge lines")
        return cls.from_edges(n, zip(rest[0::2], rest[1::2]))

    @classmethod
    def read(cls, path: str | Path) -> "Tree":
        return cls.loads(Path(path).read_text())


def enumerate_paths(tree: Tree) -> Iterator[TreePath]:
    """Every path of ``tree`` once per unordered endpoint pair, single vertices included."""
    for u in range(tree.n):
        for v in range(u, tree.n):
            yield tree.path(u, v)


@dataclass(frozen=True)
class PlaneArborescence:
    """Rooted tree with arcs directed away from the root and ordered children.

    The last entry of ``children[v]`` is the rightmost child of ``v``.
    """

    root: int
    children: tuple[tuple[int, ...], ...]

    @classmethod
    def from_tree(cls, tree: Tree, root: int, last_child: dict[int, int] | None = None) -> "PlaneArborescence":
        """Orient ``tree`` away from ``root``; children follow adjacency order except
        that ``last_child[v]`` (when given) is moved to the end of ``v``'s children."""
        parent = tree.parents_from(root)
        last_child = last_child or {}
        kids = []
        for v in range(tree.n):
            ch = [w for w in tree.adjacency[v] if parent[w] == v]
            if v in last_child:
                w = last_child[v]
                if w not in ch:
                    raise ValueError(f"{w} is not a child of {v}")
                ch.remove(w)
                ch.append(w)
            kids.append(tuple(ch))
        return cls(root, tuple(kids))

    @property
    def n(self) -> int:
        return len(self.children)

    @cached_property
    def parent(self) -> tuple[int | None, ...]:
        par: list[int | None] = [None] * self.n
        for v, ch in enumerate(self.children):
            for w in ch:
                par[w] = v
        return tuple(par)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [0] * self.n
        for v in self.dfs_order:
            for w in self.children[v]:
                d[w] = d[v] + 1
        return tuple(d)

    @cached_property
    def dfs_order(self) -> tuple[int, ...]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return tuple(out)

    @cached_property
    def dfs_index(self) -> tuple[int, ...]:
        idx = [0] * self.n
        for i, v in enumerate(self.dfs_order):
            idx[v] = i
        return tuple(idx)

    @cached_property
    def subtree_size(self) -> tuple[int, ...]:
        size = [1] * self.n
        for v in reversed(self.dfs_order):
            p = self.parent[v]
            if p is not None:
                size[p] += size[v]
        return tuple(size)

    @cached_property
    def rightmost(self) -> TreePath:
        out = [self.root]
        while self.children[out[-1]]:
            out.append(self.children[out[-1]][-1])
        return tuple(out)

    def up_set(self, v: int) -> frozenset[int]:
        i = self.dfs_index[v]
        return frozenset(self.dfs_order[i : i + self.subtree_size[v]])

    def ancestors(self, v: int) -> list[int]:
        """Root-to-``v`` chain, both ends included."""
        chain = [v]
        while self.parent[chain[-1]] is not None:
            chain.append(self.parent[chain[-1]])
        chain.reverse()
        return chain

    def is_directed_path(self, seq: Sequence[int]) -> bool:
        return bool(seq) and len(set(seq)) == len(seq) and all(
            self.parent[b] == a for a, b in zip(seq, seq[1:])
        )

    def directed_paths(self) -> Iterator[TreePath]:
        """All directed paths (single vertices included), grouped by start vertex."""
        for s in self.dfs_order:
            stack = [(s,)]
            while stack:
                p = stack.pop()
                yield p
                for w in reversed(self.children[p[-1]]):
                    stack.append(p + (w,))


def rightmost_path(arb: PlaneArborescence) -> TreePath:
    return arb.rightmost


def up_set(arb: PlaneArborescence, v: int) -> frozenset[int]:
    return arb.up_set(v)


def dfs_left_to_right(arb: PlaneArborescence) -> tuple[int, ...]:
    return arb.dfs_order
