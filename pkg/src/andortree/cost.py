"""Deterministic query algorithms as Boolean decision trees.

A decision tree asks for one leaf at a time and branches on the answer; a
terminal declares the value of the root. Its cost under a distribution is
the expected number of queries.
"""
from __future__ import annotations

import graphlib
from itertools import product
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .tree import (
    IndependentDistribution,
    KnowledgeState,
    Path,
    TreeShape,
    format_path,
    resolve,
)


@dataclass(frozen=True)
class Terminal:
    value: int


@dataclass(frozen=True)
class Query:
    leaf: Path
    on_zero: "DecisionTree"
    on_one: "DecisionTree"


DecisionTree = Union[Terminal, Query]

# Sequence of (leaf, answer) pairs leading from the top of a decision tree to a node.
Trail = tuple[tuple[Path, int], ...]


class InvalidAlgorithm(ValueError):
    def __init__(self, defects: list["Defect"]):
        super().__init__("; ".join(str(d) for d in defects))
        self.defects = defects


@dataclass(frozen=True)
class Defect:
    trail: Trail
    message: str

    def __str__(self) -> str:
        where = " ".join(f"{format_path(leaf)}={v}" for leaf, v in self.trail) or "<top>"
        return f"at [{where}]: {self.message}"


def format_trail(trail: Trail) -> str:
    return " ".join(f"{format_path(leaf)}={v}" for leaf, v in trail)


def iter_paths(alg: DecisionTree) -> Iterator[tuple[Trail, Terminal]]:
    """Every root-to-terminal path, 0-branches first."""
    stack: list[tuple[DecisionTree, Trail]] = [(alg, ())]
    while stack:
        node, trail = stack.pop()
        if isinstance(node, Terminal):
            yield trail, node
            continue
        stack.append((node.on_one, trail + ((node.leaf, 1),)))
        stack.append((node.on_zero, trail + ((node.leaf, 0),)))


def queried_leaves(alg: DecisionTree) -> set[Path]:
    seen: set[int] = set()
    leaves: set[Path] = set()
    stack = [alg]
    while stack:
        node = stack.pop()
        if id(node) in seen or isinstance(node, Terminal):
            continue
        seen.add(id(node))
        leaves.add(node.leaf)
        stack.extend((node.on_zero, node.on_one))
    return leaves


def validate(alg: DecisionTree, shape: TreeShape) -> list[Defect]:
    """Defects of ``alg`` as an algorithm for the root of ``shape``.

    An empty list means the tree never repeats a query on a path and every
    terminal's value is forced by the answers leading to it. Querying a leaf
    whose value no longer matters is allowed.
    """
    for leaf in queried_leaves(alg):
        shape.check_leaf(leaf)
    defects = []
    for trail, terminal in iter_paths(alg):
        values: dict[Path, int] = {}
        repeated = None
        for leaf, v in trail:
            if leaf in values:
                repeated = leaf
                break
            values[leaf] = v
        if repeated is not None:
            defects.append(Defect(trail, f"leaf {format_path(repeated)} queried twice"))
            continue
        root = resolve(shape, KnowledgeState.of(values))[()]
        if root is None:
            defects.append(Defect(trail, f"terminal {terminal.value} reached with the root undetermined"))
        elif root != terminal.value:
            defects.append(Defect(trail, f"terminal {terminal.value} but the root is {root}"))
    return defects


def expected_cost(alg: DecisionTree, dist: IndependentDistribution, check: bool = True) -> Fraction:
    """Exact expected number of queries made by ``alg``."""
    if check:
        defects = validate(alg, dist.shape)
        if defects:
            raise InvalidAlgorithm(defects)
    memo: dict[int, Fraction] = {}

    def cost(node: DecisionTree) -> Fraction:
        if isinstance(node, Terminal):
            return Fraction(0)
        key = id(node)
        if key not in memo:
            p = dist[node.leaf]
            memo[key] = 1 + p * cost(node.on_zero) + (1 - p) * cost(node.on_one)
        return memo[key]

    return cost(alg)


@dataclass(frozen=True)
class DirectionalCheck:
    ok: bool
    order: tuple[Path, ...] = ()
    cycle: tuple[Path, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_directional(alg: DecisionTree) -> DirectionalCheck:
    """Whether one linear order of the leaves is respected on every path.

    On success ``order`` lists the queried leaves in such an order; on
    failure ``cycle`` holds leaves whose precedence contradicts itself.
    """
    sorter: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
    seen: set[int] = set()
    stack = [alg]
    while stack:
        node = stack.pop()
        if isinstance(node, Terminal) or id(node) in seen:
            continue
        seen.add(id(node))
        sorter.add(node.leaf)
        for child in (node.on_zero, node.on_one):
            if isinstance(child, Query):
                sorter.add(child.leaf, node.leaf)
                stack.append(child)
    try:
        return DirectionalCheck(True, order=tuple(sorter.static_order()))
    except graphlib.CycleError as exc:
        return DirectionalCheck(False, cycle=tuple(exc.args[1]))


@dataclass(frozen=True)
class DepthFirstViolation:
    trail: Trail
    leaf: Path
    open_node: Path

    def __str__(self) -> str:
        return (
            f"after [{format_trail(self.trail)}] queries {format_path(self.leaf)} "
            f"while {format_path(self.open_node)} is open"
        )


@dataclass(frozen=True)
class DepthFirstCheck:
    ok: bool
    witness: Optional[DepthFirstViolation] = None

    def __bool__(self) -> bool:
        return self.ok


def open_nodes(shape: TreeShape, values: dict[Path, int]) -> list[Path]:
    """Gates with a queried leaf below them whose value is still unknown."""
    resolution = resolve(shape, KnowledgeState.of(values))
    opened = set()
    for leaf in values:
        for k in range(len(leaf)):
            opened.add(leaf[:k])
    return sorted(g for g in opened if resolution[g] is None)


def is_depth_first(alg: DecisionTree, shape: TreeShape) -> DepthFirstCheck:
    """Once a leaf under gate x is queried, stay under x until x is known."""

    def visit(node: DecisionTree, trail: Trail) -> Optional[DepthFirstViolation]:
        if isinstance(node, Terminal):
            return None
        values = dict(trail)
        for gate in open_nodes(shape, values):
            if node.leaf[: len(gate)] != gate:
                return DepthFirstViolation(trail, node.leaf, gate)
        return visit(node.on_zero, trail + ((node.leaf, 0),)) or visit(
            node.on_one, trail + ((node.leaf, 1),)
        )

    witness = visit(alg, ())
    return DepthFirstCheck(witness is None, witness)


def brute_force_cost(alg: DecisionTree, dist: IndependentDistribution) -> Fraction:
    """Expected query count by running ``alg`` on every full assignment."""
    shape = dist.shape
    total = Fraction(0)
    for bits in product((0, 1), repeat=len(shape.leaves)):
        assignment = dict(zip(shape.leaves, bits))
        prob = Fraction(1)
        for p, b in zip(dist.zero_probs, bits):
            prob *= p if b == 0 else 1 - p
        node, probes = alg, 0
        while isinstance(node, Query):
            probes += 1
            node = node.on_zero if assignment[node.leaf] == 0 else node.on_one
        total += prob * probes
    return total
