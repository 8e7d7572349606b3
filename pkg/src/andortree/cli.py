"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails, 2 on usage, parse
or precondition errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from .cost import expected_cost, is_depth_first, is_directional, validate
from .experiments import (
    InstanceBounds,
    case_cost_identity,
    gap_search,
    height3_priority_demo,
    make_case_scenario,
    verify_theorem,
)
from .oracle import DEFAULT_MAX_LEAVES, Oracle, OracleLimitError
from .solve import build_solve_d, gate_order, solve_d_cost, summarize
from .tree import TreeError, format_path, parse_path
from .treefile import (
    TreeSyntaxError,
    format_decision_tree,
    format_fraction,
    format_tree,
    read_decision_tree_file,
    read_tree_file,
)

DEFAULT_SEED = 2019

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    tree: Optional[str] = None
    alg: Optional[str] = None
    output: Optional[str] = None
    probe: Optional[str] = None
    depth_first: bool = False
    seed: int = DEFAULT_SEED
    trials: int = 100
    max_leaves: int = DEFAULT_MAX_LEAVES
    max_branch: int = 3
    max_gates: int = 4
    denom: int = 16
    max_witnesses: Optional[int] = None
    verbose: bool = False


def _load_tree(path: Optional[str]):
    if path is None:
        raise UsageError("--tree is required")
    try:
        return read_tree_file(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except (TreeSyntaxError, TreeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def cmd_evaluate(cfg: RunConfig, out: TextIO) -> int:
    _, dist = _load_tree(cfg.tree)
    if cfg.alg is None:
        raise UsageError("--alg is required")
    try:
        alg = read_decision_tree_file(cfg.alg)
        defects = validate(alg, dist.shape)
    except OSError as exc:
        raise UsageError(f"{cfg.alg}: {exc.strerror}") from None
    except (TreeSyntaxError, TreeError) as exc:
        raise UsageError(f"{cfg.alg}: {exc}") from None
    if defects:
        for d in defects:
            print(f"defect: {d}", file=out)
        raise UsageError(f"{cfg.alg}: invalid decision tree ({len(defects)} defects)")
    directional = is_directional(alg)
    depth_first = is_depth_first(alg, dist.shape)
    print(f"cost: {format_fraction(expected_cost(alg, dist, check=False))}", file=out)
    print("valid: yes", file=out)
    if directional:
        print("directional: yes", file=out)
        print("order: " + ",".join(format_path(p) for p in directional.order), file=out)
    else:
        print("directional: no", file=out)
        print("cycle: " + ",".join(format_path(p) for p in directional.cycle), file=out)
    print(f"depth-first: {'yes' if depth_first else 'no'}", file=out)
    if not depth_first:
        print(f"violation: {depth_first.witness}", file=out)
    return EXIT_OK


def cmd_solve(cfg: RunConfig, out: TextIO) -> int:
    shape, dist = _load_tree(cfg.tree)
    try:
        summaries = summarize(shape, dist)
    except TreeError as exc:
        raise UsageError(f"{cfg.tree}: {exc}") from None
    order = gate_order(summaries)
    print("gate-order: " + ",".join(str(i) for i in order), file=out)
    by_index = {s.index: s for s in summaries}
    for i in order:
        s = by_index[i]
        gate_leaves = shape.nodes[(i,)].children
        leaves = ",".join(format_path(gate_leaves[j].path) for j in s.leaf_order)
        print(
            f"gate-{i}: leaves={leaves} p={format_fraction(s.zero_prob)} "
            f"c={format_fraction(s.cost)} ratio={format_fraction(s.ratio)}",
            file=out,
        )
    print(f"cost: {format_fraction(solve_d_cost(shape, dist))}", file=out)
    if cfg.output:
        _write(cfg.output, format_decision_tree(build_solve_d(shape, dist)))
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out: TextIO) -> int:
    shape, dist = _load_tree(cfg.tree)
    try:
        oracle = Oracle(shape, dist, depth_first=cfg.depth_first, max_leaves=cfg.max_leaves)
    except (OracleLimitError, TreeError) as exc:
        raise UsageError(f"{cfg.tree}: {exc}") from None
    best = oracle.optimum()
    costs = oracle.first_probe_costs()
    first = sorted(leaf for leaf, c in costs.items() if c == best.cost)
    print(f"mode: {'depth-first' if cfg.depth_first else 'unrestricted'}", file=out)
    print(f"cost: {format_fraction(best.cost)}", file=out)
    print("optimal-first-probes: " + ",".join(format_path(p) for p in first), file=out)
    print(f"strategy-depth-first: {'yes' if is_depth_first(best.strategy, shape) else 'no'}", file=out)
    if cfg.output:
        _write(cfg.output, format_decision_tree(best.strategy))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    bounds = InstanceBounds(cfg.max_gates, cfg.max_branch, cfg.max_leaves, cfg.denom)
    report = verify_theorem(cfg.trials, cfg.seed, bounds)
    out.write(report.format())
    if cfg.verbose:
        print(f"elapsed: {report.elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_gap_search(cfg: RunConfig, out: TextIO) -> int:
    report = gap_search(cfg.trials, cfg.seed, denom=cfg.denom, max_witnesses=cfg.max_witnesses)
    out.write(report.format())
    if cfg.output:
        os.makedirs(cfg.output, exist_ok=True)
        for k, w in enumerate(report.witnesses):
            _write(os.path.join(cfg.output, f"witness-{k}.tree"), format_tree(w.dist))
            _write(
                os.path.join(cfg.output, f"witness-{k}.optimal.dt"),
                format_decision_tree(w.optimal.strategy),
            )
            _write(
                os.path.join(cfg.output, f"witness-{k}.depth-first.dt"),
                format_decision_tree(w.depth_first.strategy),
            )
    return EXIT_OK if report.witnesses and not report.unconfirmed else EXIT_FAILED


def cmd_case_identity(cfg: RunConfig, out: TextIO) -> int:
    _, dist = _load_tree(cfg.tree)
    if cfg.probe is None:
        raise UsageError("--probe is required")
    try:
        probe = parse_path(cfg.probe)
        scn = make_case_scenario(dist, probe)
        if not scn.y or not scn.z:
            raise TreeError(
                f"probing {cfg.probe} leaves Y or Z empty (Y={len(scn.y)} leaves, Z={len(scn.z)} leaves)"
            )
    except TreeError as exc:
        raise UsageError(str(exc)) from None
    for name, seq in (("Y", scn.y), ("X", scn.x), ("Z", scn.z)):
        print(f"{name}: " + ",".join(format_path(p) for p in seq), file=out)
    result = case_cost_identity(scn)
    out.write(result.format())
    return EXIT_OK if result.holds else EXIT_FAILED


def cmd_h3_demo(cfg: RunConfig, out: TextIO) -> int:
    dist = None
    if cfg.tree is not None:
        _, dist = _load_tree(cfg.tree)
    try:
        demo = height3_priority_demo(dist)
    except TreeError as exc:
        raise UsageError(str(exc)) from None
    out.write(demo.format())
    return EXIT_OK if demo.holds else EXIT_FAILED


COMMANDS = {
    "evaluate": cmd_evaluate,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "gap-search": cmd_gap_search,
    "case-identity": cmd_case_identity,
    "h3-demo": cmd_h3_demo,
}


def run(cfg: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="andortree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="exact cost and properties of a decision tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--alg", required=True)

    p = sub.add_parser("solve", help="optimal depth-first directional algorithm (height <= 2)")
    p.add_argument("--tree", required=True)
    p.add_argument("--emit-decision-tree", dest="output")

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    p.add_argument("--tree", required=True)
    p.add_argument("--depth-first", action="store_true")
    p.add_argument("--emit-strategy", dest="output")
    p.add_argument("--max-leaves", type=_positive, default=DEFAULT_MAX_LEAVES)

    p = sub.add_parser("verify", help="random check that SOLVE_d is optimal")
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-leaves", type=_positive, default=10)
    p.add_argument("--max-branch", type=_positive, default=3)
    p.add_argument("--max-gates", type=_positive, default=4)
    p.add_argument("--denom", type=_positive, default=16)
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("gap-search", help="height-3 distributions with no depth-first optimum")
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--denom", type=_positive, default=16)
    p.add_argument("--max-witnesses", type=_positive)
    p.add_argument("--emit-witness", dest="output")

    p = sub.add_parser("case-identity", help="cost identity between the swapped algorithms A and B")
    p.add_argument("--tree", required=True)
    p.add_argument("--probe", required=True)

    p = sub.add_parser("h3-demo", help="why the exchange argument fails at height 3")
    p.add_argument("--tree")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
