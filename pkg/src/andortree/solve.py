"""The optimal depth-first directional algorithm on AND-OR trees of height <= 2.

The root is an AND gate whose children are OR gates over leaves. Within a
gate, leaves are probed in ascending order of their probability of being 0;
gates are probed in ascending order of cost / probability-of-0, where cost is
the optimal expected cost of evaluating the gate alone. Ties go to the lower
index.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .cost import DecisionTree, Query, Terminal
from .tree import (
    AND,
    OR,
    IndependentDistribution,
    KnowledgeState,
    Path,
    TreeError,
    TreeShape,
    relevant_leaves,
    resolve,
)


@dataclass(frozen=True)
class GateSummary:
    index: int
    leaf_order: tuple[int, ...]
    zero_prob: Fraction
    cost: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.cost / self.zero_prob


def gate_summary(probs: Sequence[Fraction], index: int = 0) -> GateSummary:
    """Summarize one OR gate given its leaves' probabilities of being 0."""
    if not probs:
        raise ValueError("a gate needs at least one leaf")
    for p in probs:
        if not 0 < p < 1:
            raise ValueError(f"leaf probability {p} must lie strictly between 0 and 1")
    # sorted() is stable, so equal probabilities keep index order
    order = tuple(sorted(range(len(probs)), key=lambda j: probs[j]))
    cost = Fraction(0)
    reach = Fraction(1)
    # the gate stops at the first 1; the last leaf is probed only if all others were 0
    for j in order:
        cost += reach
        reach *= probs[j]
    return GateSummary(index, order, reach, cost)


def _compare_ratio(a: GateSummary, b: GateSummary) -> int:
    lhs = a.cost * b.zero_prob
    rhs = b.cost * a.zero_prob
    if lhs != rhs:
        return -1 if lhs < rhs else 1
    return (a.index > b.index) - (a.index < b.index)


def gate_order(summaries: Iterable[GateSummary]) -> tuple[int, ...]:
    """Gate indices by ascending cost/zero-probability, lower index on ties."""
    return tuple(s.index for s in sorted(summaries, key=functools.cmp_to_key(_compare_ratio)))


def check_height_two(shape: TreeShape) -> None:
    if shape.kind != AND:
        raise TreeError("the root must be an AND gate")
    for gate in shape.root.children:
        if gate.is_leaf or gate.kind != OR or not all(c.is_leaf for c in gate.children):
            raise TreeError("every child of the root must be an OR gate over leaves (height <= 2)")


def summarize(shape: TreeShape, dist: IndependentDistribution) -> list[GateSummary]:
    """One summary per root child; ``index`` is the child's own index."""
    check_height_two(shape)
    dist.require_admissible()
    summaries = []
    for gate in shape.root.children:
        s = gate_summary([dist[leaf.path] for leaf in gate.children], index=gate.path[0])
        summaries.append(s)
    return summaries


def solve_order(shape: TreeShape, dist: IndependentDistribution) -> tuple[Path, ...]:
    """All leaves in the order SOLVE_d would probe them if nothing were skipped."""
    summaries = {s.index: s for s in summarize(shape, dist)}
    gates = {g.path[0]: g for g in shape.root.children}
    order: list[Path] = []
    for i in gate_order(summaries.values()):
        leaves = gates[i].children
        order.extend(leaves[k].path for k in summaries[i].leaf_order)
    return tuple(order)


def priority_algorithm(shape: TreeShape, order: Sequence[Path]) -> DecisionTree:
    """Probe leaves in a fixed priority order, skipping those that no longer matter.

    Stops as soon as the root is determined. When ``order`` keeps each
    gate's leaves contiguous the result is depth-first and directional.
    """
    if sorted(order) != sorted(shape.leaves):
        raise TreeError("priority order must list every leaf exactly once")

    def build(state: KnowledgeState) -> DecisionTree:
        root = resolve(shape, state)[()]
        if root is not None:
            return Terminal(root)
        relevant = set(relevant_leaves(shape, state))
        leaf = next(l for l in order if l in relevant)
        return Query(leaf, build(state.with_value(leaf, 0)), build(state.with_value(leaf, 1)))

    return build(KnowledgeState())


def build_solve_d(shape: TreeShape, dist: IndependentDistribution) -> DecisionTree:
    return priority_algorithm(shape, solve_order(shape, dist))


def solve_d_cost(shape: TreeShape, dist: IndependentDistribution) -> Fraction:
    """Closed-form cost: gate costs weighted by the chance all earlier gates were 1."""
    summaries = {s.index: s for s in summarize(shape, dist)}
    total = Fraction(0)
    reach = Fraction(1)
    for i in gate_order(summaries.values()):
        total += reach * summaries[i].cost
        reach *= 1 - summaries[i].zero_prob
    return total


def restrict_and_solve(
    shape: TreeShape, dist: IndependentDistribution, removed: Iterable[Path] = ()
) -> DecisionTree:
    """SOLVE on the tree left after removing ``removed``; original indices are kept."""
    removed = list(removed)
    sub = shape.restrict(removed) if removed else shape
    return build_solve_d(sub, dist.restrict(sub))


def depth_first_directional_orders(shape: TreeShape) -> Iterator[tuple[Path, ...]]:
    """Every gate order combined with every within-gate leaf order."""
    check_height_two(shape)
    gates = [tuple(leaf.path for leaf in g.children) for g in shape.root.children]
    for gate_perm in permutations(gates):
        for leaf_perms in product(*(permutations(g) for g in gate_perm)):
            yield tuple(leaf for perm in leaf_perms for leaf in perm)
