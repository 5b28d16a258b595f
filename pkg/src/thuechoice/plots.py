"""PNG figures for the report commands; rendered off-screen."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .decomposition import PathPartition  # noqa: E402


def _save(fig, out: Path) -> Path:
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_partition(pp: PathPartition, out: Path, coloring: dict[int, int] | None = None) -> Path:
    """Classes drawn horizontally at the height of their level, children to the
    right of their parent's attachment point."""
    shape = pp.shape
    x0: dict[int, float] = {}
    cursor = [0.0]

    def place(c: int) -> None:
        x0[c] = cursor[0]
        cursor[0] += len(pp.paths[c]) + 1
        for k in shape.children[c]:
            place(k)

    place(shape.root)
    pos = {}
    for c, path in enumerate(pp.paths):
        for i, v in enumerate(path):
            pos[v] = (x0[c] + i, shape.depth[c])
    fig, ax = plt.subplots(figsize=(max(4.0, cursor[0] * 0.35), 1.5 + pp.height))
    for u, v in pp.host.edges:
        (a, b), (c, d) = pos[u], pos[v]
        style = "-" if pp.class_of[u] == pp.class_of[v] else ":"
        ax.plot([a, c], [b, d], style, color="0.4", lw=1)
    xs, ys = zip(*(pos[v] for v in range(pp.host.n)))
    ax.scatter(xs, ys, s=60, c=[(coloring or {}).get(v, 0) for v in range(pp.host.n)], cmap="tab20", zorder=3)
    for v, (a, b) in pos.items():
        ax.annotate(str(v), (a, b), textcoords="offset points", xytext=(0, 6), ha="center", fontsize=7)
    ax.set_ylabel("level")
    ax.set_yticks(range(pp.height + 1))
    ax.set_xticks([])
    ax.set_title(f"path-partition, height {pp.height}")
    return _save(fig, out)


def plot_depth_trace(depths: Sequence[int], out: Path, title: str = "current depth per iteration") -> Path:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.step(range(1, len(depths) + 1), depths, where="post")
    ax.set_xlabel("iteration")
    ax.set_ylabel("depth")
    ax.set_title(title)
    return _save(fig, out)


def plot_histogram(values: Sequence[float], out: Path, xlabel: str, title: str, bound: float | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.hist(values, bins=min(40, max(5, len(set(values)))))
    if bound is not None:
        ax.axvline(bound, color="red", ls="--", label=f"bound {bound:g}")
        ax.legend()
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    ax.set_title(title)
    return _save(fig, out)


def plot_lengths(lengths: Sequence[int], out: Path, target: int) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.plot(range(1, len(lengths) + 1), lengths, lw=0.8)
    ax.axhline(target, color="red", ls="--", lw=0.8)
    ax.set_xlabel("step")
    ax.set_ylabel("sequence length")
    ax.set_title("append-and-erase run")
    return _save(fig, out)
