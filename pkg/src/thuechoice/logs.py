"""Compact run logs and their inversion back to the random input.

A log holds the depth of the current vertex after each iteration, the final
sublist ranks, and for each retraction the number of erased-path vertices
below the top that lie on the anchor together with the ranks of the erased
sublists among those meeting their partner.  Given the instance, a log
determines the random input that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .graph_core import PlaneArborescence
from .repetition import ListAssignment
from .subsets import rank_subset, unrank_intersecting
from .sublist_solver import RunResult, SublistSolver, colors_of


class LogDecodeError(ValueError):
    pass


@dataclass(frozen=True)
class MLog:
    depths: tuple[int, ...]
    ranks: tuple[int | None, ...]
    on_anchor: tuple[int, ...]
    gammas: tuple[tuple[int, ...] | None, ...]

    @property
    def iterations(self) -> int:
        return len(self.depths)

    def to_json(self) -> dict:
        return {
            "D": list(self.depths),
            "S": {str(v): s for v, s in enumerate(self.ranks)},
            "B": list(self.on_anchor),
            "Gamma": [None if g is None else list(g) for g in self.gammas],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MLog":
        return cls(
            tuple(int(d) for d in data["D"]),
            _ranks_from_json(data["S"]),
            tuple(int(b) for b in data["B"]),
            tuple(None if g is None else tuple(int(x) for x in g) for g in data["Gamma"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "MLog":
        return cls.from_json(json.loads(text))


def _ranks_from_json(data) -> tuple[int | None, ...]:
    if isinstance(data, dict):
        data = [data[str(v)] for v in range(len(data))]
    return tuple(None if s is None else int(s) for s in data)


def record_mlog(result: RunResult) -> MLog:
    lists = result.lists
    ranks = [None if s is None else rank_subset(lists[v], s) for v, s in enumerate(result.sublists.sub)]
    depths, bs, gammas = [], [], []
    for st in result.trace:
        depths.append(st.depth)
        if st.bad is None:
            bs.append(0)
            gammas.append(None)
        else:
            bs.append(st.on_anchor)
            gammas.append(st.gamma)
    return MLog(tuple(depths), tuple(ranks), tuple(bs), tuple(gammas))


# depth sequences


def depth_differences(depths: Sequence[int]) -> list[int]:
    """Differences against the previous depth, the root depth 0 coming first."""
    prev, out = 0, []
    for d in depths:
        out.append(d - prev)
        prev = d
    return out


def encode_dprime(diffs: Sequence[int]) -> list[int]:
    """Each difference k <= 1 becomes +1 followed by 1 - k copies of -1."""
    out = []
    for k in diffs:
        if k > 1:
            raise ValueError(f"depth cannot rise by {k} in one iteration")
        out.append(1)
        out.extend([-1] * (1 - k))
    return out


def decode_dprime(seq: Sequence[int]) -> list[int]:
    out: list[int] = []
    for x in seq:
        if x == 1:
            out.append(1)
        elif x == -1:
            if not out:
                raise ValueError("sequence must start with +1")
            out[-1] -= 1
        else:
            raise ValueError(f"entry {x} is not +-1")
    return out


def is_dprime_valid(seq: Sequence[int]) -> bool:
    """Every prefix stays non-negative and the sequence starts with +1."""
    total = 0
    for x in seq:
        total += x
        if total < 0:
            return False
    return bool(seq) and seq[0] == 1


def count_dprime_sequences(m: int) -> int:
    """Number of encoded depth sequences with exactly ``m`` entries +1.

    These are the lattice paths of ``m`` blocks ``1, -1, ..., -1`` whose partial
    sums never go negative.
    """
    # height -> count after each complete block
    cur = {0: 1}
    for _ in range(m):
        nxt: dict[int, int] = {}
        for h, c in cur.items():
            top = h + 1
            for down in range(top + 1):
                nxt[top - down] = nxt.get(top - down, 0) + c
        cur = nxt
    return sum(cur.values())


# bounds


@dataclass(frozen=True)
class LogAudit:
    iterations: int
    dprime_length: int
    gamma_total: int
    b_total: int
    gamma_max: int
    gamma_bound: int
    intersecting_count: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["violations"] = list(self.violations)
        out["ok"] = self.ok
        return out


def gamma_bound(ell: int, list_size: int) -> int:
    return ell * ell * comb(list_size - 1, ell - 1)


def audit_log_bounds(log: MLog, ell: int, list_size: int, result: RunResult | None = None) -> LogAudit:
    """Per-run counting checks; with the run at hand the Γ entries are also
    compared with the exact size of their intersecting collections."""
    m = log.iterations
    diffs = depth_differences(log.depths)
    bad: list[str] = []
    try:
        dp = encode_dprime(diffs)
    except ValueError as exc:
        return LogAudit(m, 0, 0, 0, 0, 0, 0, (str(exc),))
    if not m <= len(dp) <= 2 * m:
        bad.append(f"|D'| = {len(dp)} outside [{m}, {2 * m}]")
    if sum(1 for x in dp if x == 1) != m or not is_dprime_valid(dp):
        bad.append("D' is not a valid walk with M up-steps")
    g_total = sum(len(g) for g in log.gammas if g is not None)
    minus = len(dp) - m
    if g_total > minus:
        bad.append(f"sum of |Gamma_i| = {g_total} exceeds the -1 count {minus}")
    b_total = sum(log.on_anchor)
    if b_total > 2 * m:
        bad.append(f"sum of b_i = {b_total} exceeds 2M = {2 * m}")
    for i, (b, g) in enumerate(zip(log.on_anchor, log.gammas), start=1):
        if (b == 0) != (g is None):
            bad.append(f"iteration {i}: b = {b} disagrees with Gamma presence")
        elif g is not None and not 1 <= b <= 2 * len(g):
            bad.append(f"iteration {i}: b = {b} outside [1, {2 * len(g)}]")
    top = gamma_bound(ell, list_size)
    exact = comb(list_size, ell) - comb(list_size - ell, ell)
    g_max = max((x for g in log.gammas if g is not None for x in g), default=0)
    if g_max > top:
        bad.append(f"gamma {g_max} exceeds {top}")
    if g_max > exact:
        bad.append(f"gamma {g_max} exceeds the intersecting count {exact}")
    if result is not None:
        for i, st in enumerate(result.trace, start=1):
            if st.bad is not None and not all(1 <= x <= c for x, c in zip(st.gamma, st.gamma_limits)):
                bad.append(f"iteration {i}: gamma outside its collection")
    return LogAudit(m, len(dp), g_total, b_total, g_max, top, exact, tuple(bad))


# decoding


def decode_log(
    log: MLog,
    arb: PlaneArborescence,
    lists: ListAssignment,
    ell: int,
    anchor: Sequence[int] | None = None,
) -> list[int]:
    """Random input of the run that wrote ``log``, recovered last iteration first."""
    solver = SublistSolver(arb, lists, ell, anchor)
    n = arb.n
    if len(log.ranks) != n:
        raise LogDecodeError("rank vector length differs from vertex count")
    m = log.iterations
    if m == 0 or len(log.on_anchor) != m or len(log.gammas) != m:
        raise LogDecodeError("log parts have inconsistent lengths")
    sub: list[int | None] = []
    for v, rk in enumerate(log.ranks):
        try:
            sub.append(None if rk is None else solver.sample(v, rk))
        except ValueError as exc:
            raise LogDecodeError(f"rank of vertex {v}: {exc}") from None
    order = arb.dfs_order
    out = [0] * m
    diffs = depth_differences(log.depths)
    for i in range(m - 1, 0, -1):
        k = diffs[i]
        if k == 1:
            u = _last_open(arb, sub)
            out[i] = solver.rank(u, sub[u])
            solver.erase(u, sub)
            continue
        if k > 1:
            raise LogDecodeError(f"depth rises by {k} at iteration {i + 1}")
        r = 1 - k
        top = next((v for v in order if sub[v] is None), None)
        if top is None or top == arb.root:
            raise LogDecodeError(f"no retraction target at iteration {i + 1}")
        b = log.on_anchor[i]
        if b < 1:
            raise LogDecodeError(f"anchor count {b} at iteration {i + 1}")
        w = top
        while w not in solver.on_anchor:
            w = arb.parent[w]
        steps = b if w == top else b - 1
        if arb.depth[w] < steps:
            raise LogDecodeError(f"anchor count {b} reaches above the root")
        chain = solver.chain[top]
        first = arb.depth[w] - steps
        path = chain[first:]
        g = len(path) - 1 - r
        if g < 0:
            raise LogDecodeError(f"erased path too short at iteration {i + 1}")
        gam = log.gammas[i]
        if gam is None or len(gam) != r:
            raise LogDecodeError(f"expected {r} gamma entries at iteration {i + 1}")
        cur = top
        for j in range(r):
            ref = sub[path[j]]
            if ref is None:
                raise LogDecodeError("partner sublist undefined")
            try:
                chosen = unrank_intersecting(lists[cur], colors_of(ref), gam[j], ell)
            except ValueError as exc:
                raise LogDecodeError(str(exc)) from None
            mask = 0
            for c in chosen:
                mask |= 1 << c
            if j == r - 1:
                out[i] = solver.rank(cur, mask)
                break
            sub[cur] = mask
            nxt = solver.sweep(cur, sub)
            if nxt is None:
                raise LogDecodeError(f"sweep completed unexpectedly at iteration {i + 1}")
            cur = nxt
    root = arb.root
    if sub[root] is None:
        raise LogDecodeError("root undefined after unwinding")
    out[0] = solver.rank(root, sub[root])
    return out


def _last_open(arb: PlaneArborescence, sub: Sequence[int | None]) -> int:
    for v in reversed(arb.dfs_order):
        if sub[v] is not None and any(sub[c] is None for c in arb.children[v]):
            return v
    raise LogDecodeError("no defined vertex with an undefined child")


def dprime_of_depths(depths: Sequence[int]) -> list[int]:
    return encode_dprime(depth_differences(depths))


def depths_of_dprime(seq: Sequence[int]) -> list[int]:
    out, d = [], 0
    for k in decode_dprime(seq):
        d += k
        out.append(d)
    return out


def log_size_bound(n: int, ell: int, list_size: int, m: int) -> int:
    """Crude count of distinct logs of ``m`` iterations, for the counting check."""
    ranks = (comb(list_size, ell) + 1) ** n
    return count_dprime_sequences(m) * ranks
