"""Guarded greedy colouring from thinned sublists, and the end-to-end pipeline."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .decomposition import PathDecomposition, PathPartition, build_path_partition, tree_pathwidth_exact
from .errors import InvariantBreach
from .graph_core import Tree, TreePath
from .repetition import Coloring, ListAssignment, SublistAssignment, verify_nonrepetitive
from .sublist_solver import ThinReport, thin_lists


@dataclass(frozen=True)
class GuardSet:
    vertex: int
    guards: frozenset[int]


def guards(pp: PathPartition, v: int) -> GuardSet:
    """Parent-side ends of the vertical edges met walking from ``v`` down to the root-path."""
    out = []
    x = pp.class_of[v]
    while pp.shape.parent[x] is not None:
        out.append(pp.links[x][1])
        x = pp.shape.parent[x]
    return GuardSet(v, frozenset(out))


class EmptyChoice(ValueError):
    pass


def greedy_color(tree: Tree, pp: PathPartition, sub: SublistAssignment | Sequence[frozenset[int]]) -> Coloring:
    """Colour by level, then vertex id, with the smallest colour unused by the guards."""
    lists = sub.sub if isinstance(sub, SublistAssignment) else tuple(sub)
    levels = pp.levels
    phi: Coloring = {}
    for v in sorted(range(tree.n), key=lambda w: (levels[w], w)):
        if lists[v] is None:
            raise ValueError(f"sublist of vertex {v} is undefined")
        taken = {phi[g] for g in guards(pp, v).guards}
        free = sorted(set(lists[v]) - taken)
        if not free:
            raise EmptyChoice(f"vertex {v}: every colour is used by a guard")
        phi[v] = free[0]
    return phi


@dataclass
class PipelineResult:
    coloring: Coloring
    pathwidth: int
    decomposition: PathDecomposition
    partition: PathPartition
    sublists: SublistAssignment
    chain: list[int] = field(default_factory=list)


class VerificationFailure(InvariantBreach):
    def __init__(self, witness: TreePath, state: dict):
        super().__init__(f"coloured tree has a repetitive path {list(witness)}")
        self.witness = witness
        self.state = state


def best_partition(tree: Tree, pd: PathDecomposition) -> PathPartition:
    """Lowest partition over all choices of the vertex kept on the root-path
    (ties to the smallest vertex)."""
    best = None
    for u in range(tree.n):
        pp = build_path_partition(tree, pd, u)
        if best is None or pp.height < best.height:
            best = pp
    assert best is not None
    return best


def pipeline(
    tree: Tree,
    lists: ListAssignment,
    schedule: Sequence[int],
    rng: random.Random,
    retries: int = 16,
    root: int | None = None,
) -> PipelineResult:
    """Pathwidth, partition, thinning, greedy colouring, then a full check."""
    k, pd = tree_pathwidth_exact(tree)
    pp = best_partition(tree, pd) if root is None else build_path_partition(tree, pd, root)
    report = ThinReport(SublistAssignment((), 0), [])
    sub = thin_lists(tree, pp, lists, schedule, rng, retries=retries, report=report)
    phi = greedy_color(tree, pp, sub)
    for v, c in phi.items():
        if c not in sub[v] or c not in lists[v]:
            raise InvariantBreach(f"vertex {v} coloured outside its lists")
        for g in guards(pp, v).guards:
            if phi[g] == c:
                raise InvariantBreach(f"vertex {v} shares a colour with its guard {g}")
    ok, witness = verify_nonrepetitive(tree, phi)
    if not ok:
        state = {
            "tree": tree.dumps(),
            "partition": pp.to_json(),
            "sublists": {str(v): sorted(s) for v, s in enumerate(sub.sub)},
            "coloring": {str(v): c for v, c in phi.items()},
        }
        raise VerificationFailure(witness, state)
    return PipelineResult(phi, k, pd, pp, sub, report.chain)
