"""Command-line front end.

Results go to stdout as JSON, diagnostics to stderr.  Exit codes: 0 success,
1 verification failed or not certified, 2 usage or input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from .decomposition import (
    DecompositionError,
    PathDecomposition,
    build_path_partition,
    tree_pathwidth_exact,
    validate_path_decomposition,
)
from .errors import BudgetExceeded, InvariantBreach
from .graph_core import PlaneArborescence, Tree, TreeFormatError
from .greedy import VerificationFailure, best_partition, pipeline
from .logs import LogDecodeError, MLog, audit_log_bounds, decode_log, record_mlog
from .pw2 import (
    GnlColoring,
    GnlGraph,
    RepetitivePath,
    certify_lower_bound_small,
    count_witness_bounds,
    find_repetition_or_witnesses,
    witness_count,
)
from .repetition import ListAssignment, coloring_from_json, coloring_to_json, verify_nonrepetitive
from .sequence_game import run_game, uniform_lists
from .sublist_solver import SolverConfig, SublistSolver, dump_trace, thin_lists

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(data, args) -> None:
    if getattr(args, "pretty", False):
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(json.dumps(data, sort_keys=True, separators=(",", ":")))


def _existing(path: str | None, flag: str) -> Path:
    if path is None:
        raise UsageError(f"{flag} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: no such file {path}")
    return p


def _tree(args) -> Tree:
    return Tree.read(_existing(args.tree, "--tree"))


def _lists(args, tree: Tree) -> ListAssignment:
    lists = ListAssignment.read(_existing(args.lists, "--lists"))
    if len(lists) != tree.n:
        raise UsageError(f"--lists has {len(lists)} entries for a tree on {tree.n} vertices")
    return lists


def _seed(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for this command")
    return args.seed


def _schedule(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("->", ",").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --schedule {text!r}") from None


def _figdir(args) -> Path | None:
    return Path(args.figures) if getattr(args, "figures", None) else None


# commands


def cmd_pathwidth(args) -> int:
    tree = _tree(args)
    k, pd = tree_pathwidth_exact(tree)
    _emit({"pathwidth": k, "bags": [sorted(b) for b in pd.bags]}, args)
    return OK


def cmd_partition(args) -> int:
    tree = _tree(args)
    if args.decomposition:
        pd = PathDecomposition.read(_existing(args.decomposition, "--decomposition"))
        ok, k = validate_path_decomposition(tree, pd)
        if not ok:
            raise UsageError("--decomposition is not a path decomposition of the tree")
    else:
        k, pd = tree_pathwidth_exact(tree)
    if args.root is not None and not 0 <= args.root < tree.n:
        raise UsageError(f"--root {args.root} is not a vertex")
    pp = build_path_partition(tree, pd, 0 if args.root is None else args.root)
    out = {"width": k, "height": pp.height, "partition": pp.to_json()}
    figs = _figdir(args)
    if figs:
        from .plots import plot_partition

        out["figures"] = [str(plot_partition(pp, figs / "partition.png"))]
    _emit(out, args)
    return OK


def cmd_thin(args) -> int:
    tree = _tree(args)
    lists = _lists(args, tree)
    rng = random.Random(_seed(args))
    _, pd = tree_pathwidth_exact(tree)
    pp = best_partition(tree, pd) if args.root is None else build_path_partition(tree, pd, args.root)
    sub = thin_lists(tree, pp, lists, _schedule(args.schedule), rng, retries=args.retries)
    _emit({"height": pp.height, "sublists": {str(v): sorted(s) for v, s in enumerate(sub.sub)}}, args)
    return OK


def cmd_color(args) -> int:
    tree = _tree(args)
    lists = _lists(args, tree)
    rng = random.Random(_seed(args))
    try:
        res = pipeline(tree, lists, _schedule(args.schedule), rng, retries=args.retries, root=args.root)
    except VerificationFailure as exc:
        _emit({"verified": False, "witness": list(exc.witness), "state": exc.state}, args)
        return FAILED
    out = {
        "verified": True,
        "pathwidth": res.pathwidth,
        "height": res.partition.height,
        "sizes": res.chain,
        "coloring": coloring_to_json(res.coloring),
    }
    figs = _figdir(args)
    if figs:
        from .plots import plot_partition

        out["figures"] = [str(plot_partition(res.partition, figs / "coloring.png", res.coloring))]
    _emit(out, args)
    return OK


def cmd_verify(args) -> int:
    tree = _tree(args)
    phi = coloring_from_json(json.loads(_existing(args.coloring, "--coloring").read_text()))
    if set(phi) != set(range(tree.n)):
        raise UsageError("--coloring must colour every vertex")
    ok, witness = verify_nonrepetitive(tree, phi)
    out = {"nonrepetitive": ok}
    if not ok:
        out["witness"] = list(witness)
        out["colors"] = [phi[v] for v in witness]
    _emit(out, args)
    return OK if ok else FAILED


def _arborescence(args, tree: Tree) -> PlaneArborescence:
    root = args.root or 0
    if not 0 <= root < tree.n:
        raise UsageError(f"--root {root} is not a vertex")
    return PlaneArborescence.from_tree(tree, root)


def cmd_solve(args) -> int:
    tree = _tree(args)
    lists = _lists(args, tree)
    arb = _arborescence(args, tree)
    if args.config:
        cfg = SolverConfig.from_json(json.loads(_existing(args.config, "--config").read_text()))
    else:
        if args.ell is None:
            raise UsageError("--ell or --config is required")
        m = args.max_iterations or SolverConfig.default_iterations(tree.n, args.ell, lists.size)
        cfg = SolverConfig.seeded(args.ell, lists.size, m, _seed(args))
    res = SublistSolver(arb, lists, cfg.ell).run(cfg.random_input)
    log = record_mlog(res)
    out = {
        "success": res.success,
        "iterations": len(res.trace),
        "sublists": {str(v): (None if s is None else sorted(s)) for v, s in enumerate(res.sublists.sub)},
        "log": log.to_json(),
    }
    if args.log_out:
        Path(args.log_out).write_text(log.dumps())
    if args.trace_out:
        Path(args.trace_out).write_text(dump_trace(res))
    figs = _figdir(args)
    if figs:
        from .plots import plot_depth_trace

        out["figures"] = [str(plot_depth_trace(log.depths, figs / "depths.png"))]
    _emit(out, args)
    return OK if res.success else FAILED


def cmd_log_decode(args) -> int:
    tree = _tree(args)
    lists = _lists(args, tree)
    if args.ell is None:
        raise UsageError("--ell is required")
    log = MLog.loads(_existing(args.log, "--log").read_text())
    try:
        r = decode_log(log, _arborescence(args, tree), lists, args.ell)
    except LogDecodeError as exc:
        print(f"inconsistent log: {exc}", file=sys.stderr)
        return FAILED
    _emit({"random_input": r}, args)
    return OK


def cmd_audit(args) -> int:
    if args.ell is None or args.list_size is None:
        raise UsageError("--ell and --list-size are required")
    log = MLog.loads(_existing(args.log, "--log").read_text())
    rep = audit_log_bounds(log, args.ell, args.list_size)
    _emit(rep.to_json(), args)
    return OK if rep.ok else FAILED


def cmd_gen_gnl(args) -> int:
    g = GnlGraph(args.n, args.ell)
    out: dict = {"manifest": g.manifest()}
    if g.vertex_count <= args.limit:
        tree_text = f"{g.vertex_count}\n" + "".join(f"{a} {b}\n" for a, b in g.edges())
        lists = g.lists(args.limit)
        pd = g.decomposition(args.limit)
        out["width"] = pd.width
        if args.out:
            d = Path(args.out)
            d.mkdir(parents=True, exist_ok=True)
            (d / "graph.txt").write_text(tree_text)
            (d / "lists.json").write_text(json.dumps(lists.to_json()))
            (d / "decomposition.txt").write_text(pd.dumps())
            out["files"] = [str(d / f) for f in ("graph.txt", "lists.json", "decomposition.txt")]
        else:
            out["edges"] = [[a, b] for a, b in g.edges()]
            out["lists"] = lists.to_json()
    else:
        out["lazy"] = True
        if args.out:
            d = Path(args.out)
            d.mkdir(parents=True, exist_ok=True)
            (d / "manifest.json").write_text(json.dumps(g.manifest()))
    _emit(out, args)
    return OK


def cmd_census(args) -> int:
    g = GnlGraph(args.n, args.ell)
    rng = np.random.default_rng(_seed(args))
    bounds = count_witness_bounds(args.n, args.ell)
    out: dict = {"bounds": bounds.to_json()}
    if args.certify:
        v = certify_lower_bound_small(g, budget=args.budget)
        out["certified"] = v.certified
        out["method"] = v.method
        if v.repetition is not None:
            out["repetition"] = list(v.repetition.path)
        if v.reason:
            out["reason"] = v.reason
        _emit(out, args)
        return OK if v.certified else FAILED
    make: Callable = GnlColoring.avoiding if args.mode == "avoiding" else GnlColoring.random
    found, counts = 0, []
    for _ in range(args.trials):
        col = make(g, rng)
        res = find_repetition_or_witnesses(g, col)
        counts.append(witness_count(g, col))
        if isinstance(res, RepetitivePath):
            found += 1
        elif res.count > bounds.upper:
            raise InvariantBreach("witness census above its upper bound")
    out.update({"trials": args.trials, "repetitions": found, "max_witnesses": max(counts, default=0)})
    figs = _figdir(args)
    if figs:
        from .plots import plot_histogram

        out["figures"] = [
            str(plot_histogram(counts, figs / "witnesses.png", "violating pairs", "witness census", bounds.upper))
        ]
    _emit(out, args)
    return OK


def cmd_game(args) -> int:
    rng = random.Random(_seed(args))
    if args.lists:
        data = json.loads(_existing(args.lists, "--lists").read_text())
        lists = [data[str(i)] for i in range(len(data))] if isinstance(data, dict) else data
    else:
        if args.n is None or args.list_size is None:
            raise UsageError("--n and --list-size (or --lists) are required")
        lists = uniform_lists(args.n, args.list_size)
    results = [run_game(lists, rng, args.budget, record=bool(args.figures)) for _ in range(args.trials)]
    out = {
        "trials": args.trials,
        "completed": sum(r.completed for r in results),
        "runs": [{k: v for k, v in r.to_json().items() if args.trials == 1 or k != "sequence"} for r in results],
    }
    figs = _figdir(args)
    if figs:
        from .plots import plot_lengths

        out["figures"] = [str(plot_lengths(results[0].state.history or [], figs / "game.png", len(lists)))]
    _emit(out, args)
    return OK if all(r.completed for r in results) else FAILED


# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thuechoice", description="Nonrepetitive list colourings of trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str, *flags: str):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--pretty", action="store_true", help="indented JSON")
        for f in flags:
            if f == "tree":
                sp.add_argument("--tree", help="tree file: n, then one 'u v' edge per line")
            elif f == "lists":
                sp.add_argument("--lists", help="JSON object vertex -> colour list")
            elif f == "seed":
                sp.add_argument("--seed", type=int)
            elif f == "root":
                sp.add_argument("--root", type=int)
            elif f == "figures":
                sp.add_argument("--figures", metavar="DIR", help="write PNG figures here")
            elif f == "ell":
                sp.add_argument("--ell", type=int)
            elif f == "schedule":
                sp.add_argument("--schedule", default="64,16,5", help="decreasing sizes, e.g. 64,16,5")
                sp.add_argument("--retries", type=int, default=16)
        return sp

    add("pathwidth", cmd_pathwidth, "exact pathwidth and a decomposition", "tree")
    sp = add("partition", cmd_partition, "path-partition of bounded height", "tree", "root", "figures")
    sp.add_argument("--decomposition", help="bags file, one bag per line")
    add("thin", cmd_thin, "thin lists to sublists", "tree", "lists", "seed", "root", "schedule")
    add("color", cmd_color, "full colouring pipeline", "tree", "lists", "seed", "root", "schedule", "figures")
    sp = add("verify", cmd_verify, "check a colouring for repetitions", "tree")
    sp.add_argument("--coloring", help="JSON object vertex -> colour")
    sp = add("solve", cmd_solve, "one sublist-thinning run on the tree rooted at --root", "tree", "lists", "seed", "root", "ell", "figures")
    sp.add_argument("--max-iterations", type=int)
    sp.add_argument("--config", help="solver config JSON")
    sp.add_argument("--log-out", help="write the run log here")
    sp.add_argument("--trace-out", help="write per-iteration records here (JSON lines)")
    sp = add("log-decode", cmd_log_decode, "recover the random input from a run log", "tree", "lists", "root", "ell")
    sp.add_argument("--log")
    sp = add("audit", cmd_audit, "counting checks on a run log", "ell")
    sp.add_argument("--log")
    sp.add_argument("--list-size", type=int)
    sp = add("gen-gnl", cmd_gen_gnl, "emit the pathwidth-2 family member G(n, ell)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--out", help="directory for graph, lists and decomposition files")
    sp.add_argument("--limit", type=int, default=200_000, help="largest vertex count written out in full")
    sp = add("census", cmd_census, "witness census over random colourings of G(n, ell)", "seed", "figures")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--mode", choices=("random", "avoiding"), default="random")
    sp.add_argument("--certify", action="store_true", help="try to certify that no colouring is nonrepetitive")
    sp.add_argument("--budget", type=int, default=200_000)
    sp = add("game", cmd_game, "random append-and-erase sequence", "seed", "figures")
    sp.add_argument("--n", type=int)
    sp.add_argument("--list-size", type=int)
    sp.add_argument("--lists", help="JSON list of lists, or object index -> list")
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--trials", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (UsageError, TreeFormatError, DecompositionError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
