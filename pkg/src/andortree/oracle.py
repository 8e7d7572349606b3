"""Exact optimal expected cost over all algorithms, by exhaustive DP.

A search state is the set of leaves that can still matter, kept as a bit
mask over the leaves in document order. Probing a leaf removes it; if that
settles its parent gate the whole gate is removed, and so on upward. Two
histories with the same mask have the same future, so the mask is the memo
key. The depth-first variant reads the open gates off the mask: a gate is
open exactly when part, but not all, of its subtree has been removed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .cost import DecisionTree, Query, Terminal
from .tree import AND, IndependentDistribution, Path, TreeError, TreeShape

DEFAULT_MAX_LEAVES = 12


class OracleLimitError(ValueError):
    pass


class Optimum(NamedTuple):
    cost: Fraction
    strategy: DecisionTree


@dataclass
class _Choice:
    cost: Fraction
    leaf: int


class Oracle:
    """Optimal-cost DP for one instance; not shared between threads."""

    def __init__(
        self,
        shape: TreeShape,
        dist: IndependentDistribution,
        depth_first: bool = False,
        max_leaves: int = DEFAULT_MAX_LEAVES,
    ):
        if dist.shape != shape:
            raise TreeError("distribution belongs to a different tree")
        if len(shape.leaves) > max_leaves:
            raise OracleLimitError(f"{len(shape.leaves)} leaves exceed the bound of {max_leaves}")
        dist.require_admissible()
        self.shape = shape
        self.depth_first = depth_first
        self.n = len(shape.leaves)

        index = {path: k for k, path in enumerate(shape.gates + shape.leaves)}
        self._sub = [0] * len(index)
        self._parent = [-1] * len(index)
        self._absorbing = [0] * len(index)
        for path, k in index.items():
            if path:
                self._parent[k] = index[path[:-1]]
        for bit, leaf in enumerate(shape.leaves):
            for depth in range(len(leaf) + 1):
                self._sub[index[leaf[:depth]]] |= 1 << bit
        for gate in shape.gates:
            self._absorbing[index[gate]] = 0 if shape.nodes[gate].kind == AND else 1
        self._root = index[()]
        self._leaf_node = [index[leaf] for leaf in shape.leaves]
        self._inner_gates = [index[g] for g in shape.gates if g != ()]
        self._p0 = list(dist.zero_probs)
        self._p1 = [1 - p for p in dist.zero_probs]
        self._memo: dict[int, _Choice] = {}
        self.full = (1 << self.n) - 1

    def probe(self, mask: int, bit: int, value: int) -> tuple[int, Optional[int]]:
        """State after leaf ``bit`` reads ``value``; second item is the root value if settled."""
        node = self._leaf_node[bit]
        while node != self._root:
            mask &= ~self._sub[node]
            parent = self._parent[node]
            # parent settles on an absorbing child or once every child is settled
            if value == self._absorbing[parent] or not mask & self._sub[parent]:
                node = parent
                continue
            return mask, None
        return 0, value

    def candidates(self, mask: int) -> int:
        if not self.depth_first:
            return mask
        allowed = mask
        for g in self._inner_gates:
            rest = mask & self._sub[g]
            if rest and rest != self._sub[g]:
                allowed &= self._sub[g]
        return allowed

    def _step(self, mask: int, bit: int) -> Fraction:
        total = Fraction(1)
        for value, weight in ((0, self._p0[bit]), (1, self._p1[bit])):
            nxt, root = self.probe(mask, bit, value)
            if root is None:
                total += weight * self.solve(nxt).cost
        return total

    def solve(self, mask: int) -> _Choice:
        choice = self._memo.get(mask)
        if choice is not None:
            return choice
        allowed = self.candidates(mask)
        best: Optional[_Choice] = None
        bit = 0
        while allowed >> bit:
            if allowed >> bit & 1:
                cost = self._step(mask, bit)
                if best is None or cost < best.cost:
                    best = _Choice(cost, bit)
            bit += 1
        if best is None:
            raise AssertionError("no candidate leaf in an unsettled state")
        self._memo[mask] = best
        return best

    def first_probe_costs(self) -> dict[Path, Fraction]:
        """Best achievable cost given each admissible first probe."""
        allowed = self.candidates(self.full)
        return {
            self.shape.leaves[b]: self._step(self.full, b) for b in range(self.n) if allowed >> b & 1
        }

    def strategy(self, mask: Optional[int] = None) -> DecisionTree:
        """Decision tree following the argmin choices (shared subtrees per state)."""
        built: dict[int, DecisionTree] = {}

        def build(mask: int) -> DecisionTree:
            if mask in built:
                return built[mask]
            bit = self.solve(mask).leaf
            branches = []
            for value in (0, 1):
                nxt, root = self.probe(mask, bit, value)
                branches.append(Terminal(root) if root is not None else build(nxt))
            built[mask] = Query(self.shape.leaves[bit], *branches)
            return built[mask]

        return build(self.full if mask is None else mask)

    def best_cost(self) -> Fraction:
        return self.solve(self.full).cost

    def optimum(self) -> Optimum:
        return Optimum(self.solve(self.full).cost, self.strategy())


def optimal_cost(
    shape: TreeShape, dist: IndependentDistribution, max_leaves: int = DEFAULT_MAX_LEAVES
) -> Optimum:
    """Minimum expected cost over every deterministic algorithm, with one optimal algorithm."""
    return Oracle(shape, dist, max_leaves=max_leaves).optimum()


def optimal_depth_first_cost(
    shape: TreeShape, dist: IndependentDistribution, max_leaves: int = DEFAULT_MAX_LEAVES
) -> Optimum:
    """Minimum expected cost over depth-first algorithms only."""
    return Oracle(shape, dist, depth_first=True, max_leaves=max_leaves).optimum()


def all_optimal_first_probes(
    shape: TreeShape,
    dist: IndependentDistribution,
    depth_first: bool = False,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> frozenset[Path]:
    oracle = Oracle(shape, dist, depth_first=depth_first, max_leaves=max_leaves)
    costs = oracle.first_probe_costs()
    best = min(costs.values())
    return frozenset(leaf for leaf, c in costs.items() if c == best)
