"""Brute-force reference computations used only by the tests."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator

from andortree.cost import DecisionTree, Query, Terminal
from andortree.tree import (
    AND,
    IndependentDistribution,
    KnowledgeState,
    Node,
    TreeShape,
    evaluate,
    relevant_leaves,
    resolve,
)


def all_assignments(shape: TreeShape) -> Iterator[dict]:
    for bits in product((0, 1), repeat=len(shape.leaves)):
        yield dict(zip(shape.leaves, bits))


def _assignment_weights(probs) -> tuple[list[tuple[tuple[int, ...], int]], int]:
    """Integer weights of every assignment over the common denominator ``scale``."""
    den = math.lcm(*(Fraction(p).denominator for p in probs))
    nums = [Fraction(p).numerator * (den // Fraction(p).denominator) for p in probs]
    weights = []
    for bits in product((0, 1), repeat=len(probs)):
        w = 1
        for num, b in zip(nums, bits):
            w *= num if b == 0 else den - num
        weights.append((bits, w))
    return weights, den ** len(probs)


def _order_cost(weights, scale, order) -> Fraction:
    total = 0
    for bits, w in weights:
        probes = 0
        for j in order:
            probes += 1
            if bits[j] == 1:
                break
        total += w * probes
    return Fraction(total, scale)


def or_gate_order_cost(probs, order) -> Fraction:
    """Expected probes of an OR gate in a fixed order, by enumerating assignments."""
    weights, scale = _assignment_weights(probs)
    return _order_cost(weights, scale, order)


def gate_min_cost(probs) -> Fraction:
    weights, scale = _assignment_weights(probs)
    return min(_order_cost(weights, scale, order) for order in permutations(range(len(probs))))


def depth_first_optimum(node: Node, dist: IndependentDistribution) -> tuple[Fraction, Fraction]:
    """(cost, probability of 0) of the best depth-first evaluation of ``node``.

    A depth-first algorithm finishes each child before moving on, so a gate's
    cost is the best over child orders of the chained child costs.
    """
    if node.is_leaf:
        return Fraction(1), dist[node.path]
    kids = [depth_first_optimum(c, dist) for c in node.children]
    best = None
    for perm in permutations(kids):
        cost, reach = Fraction(0), Fraction(1)
        for c, p0 in perm:
            cost += reach * c
            reach *= (1 - p0) if node.kind == AND else p0
        best = cost if best is None else min(best, cost)
    zero = Fraction(1)
    if node.kind == AND:
        for _, p0 in kids:
            zero *= 1 - p0
        zero = 1 - zero
    else:
        for _, p0 in kids:
            zero *= p0
    return best, zero


def random_decision_tree(shape: TreeShape, rng: random.Random, waste: float = 0.2) -> DecisionTree:
    """A random valid decision tree; sometimes queries leaves that no longer matter."""

    def build(state: KnowledgeState) -> DecisionTree:
        root = resolve(shape, state)[()]
        unassigned = [l for l in shape.leaves if l not in state]
        if root is not None and (not unassigned or rng.random() > waste):
            return Terminal(root)
        relevant = relevant_leaves(shape, state)
        pool = unassigned if (rng.random() < waste or not relevant) else list(relevant)
        leaf = rng.choice(pool)
        return Query(leaf, build(state.with_value(leaf, 0)), build(state.with_value(leaf, 1)))

    return build(KnowledgeState())


def all_decision_trees(shape: TreeShape) -> Iterator[DecisionTree]:
    """Every decision tree that only queries relevant leaves and stops when the root is known."""

    def build(state: KnowledgeState) -> Iterator[DecisionTree]:
        root = resolve(shape, state)[()]
        if root is not None:
            yield Terminal(root)
            return
        for leaf in relevant_leaves(shape, state):
            zeros = list(build(state.with_value(leaf, 0)))
            ones = list(build(state.with_value(leaf, 1)))
            for z, o in product(zeros, ones):
                yield Query(leaf, z, o)

    return build(KnowledgeState())


def probes_on(alg: DecisionTree, assignment: dict) -> tuple[int, int]:
    """(number of probes, declared value) when running ``alg`` on ``assignment``."""
    probes = 0
    while isinstance(alg, Query):
        probes += 1
        alg = alg.on_zero if assignment[alg.leaf] == 0 else alg.on_one
    return probes, alg.value


def declares_correct_values(alg: DecisionTree, shape: TreeShape) -> bool:
    return all(probes_on(alg, a)[1] == evaluate(shape, a) for a in all_assignments(shape))
