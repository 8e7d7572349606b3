"""Randomized verification runs and the constructions used in the optimality proof.

Everything here is deterministic given its seed and bounds; reports render
as ``key: value`` lines so that two runs can be diffed.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .cost import DecisionTree, Query, expected_cost, is_depth_first
from .oracle import Oracle, Optimum
from .solve import (
    depth_first_directional_orders,
    priority_algorithm,
    solve_d_cost,
    solve_order,
)
from .tree import (
    AND,
    OR,
    IndependentDistribution,
    KnowledgeState,
    Path,
    TreeError,
    TreeShape,
    build_shape,
    format_path,
    resolve,
)
from .treefile import format_fraction, format_tree, parse_tree


@dataclass(frozen=True)
class InstanceBounds:
    max_gates: int = 4
    max_branch: int = 3
    max_leaves: int = 10
    denom: int = 16

    def __post_init__(self) -> None:
        if self.denom < 2:
            raise ValueError("denominator bound must be at least 2")
        if min(self.max_gates, self.max_branch) < 1 or self.max_leaves < 2:
            raise ValueError("bounds too small for a two-leaf tree")


def random_probs(rng: random.Random, n: int, denom: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(1, denom - 1), denom) for _ in range(n))


def random_height2_instance(
    rng: random.Random, bounds: InstanceBounds = InstanceBounds()
) -> IndependentDistribution:
    """AND root over 1..max_gates OR gates, 2..max_leaves leaves in total."""
    while True:
        sizes = [rng.randint(1, bounds.max_branch) for _ in range(rng.randint(1, bounds.max_gates))]
        if 2 <= sum(sizes) <= bounds.max_leaves:
            break
    shape = build_shape(AND, [(OR, [None] * a) for a in sizes])
    return IndependentDistribution(shape, random_probs(rng, len(shape.leaves), bounds.denom))


def complete_binary_shape(height: int, root: str = OR) -> TreeShape:
    def spec(depth: int, kind: str):
        if depth == height:
            return None
        other = AND if kind == OR else OR
        return (kind, [spec(depth + 1, other), spec(depth + 1, other)])

    return build_shape(root, spec(0, root)[1])


def height3_shape() -> TreeShape:
    """Complete binary OR-AND tree of height 3 (OR at the root)."""
    return complete_binary_shape(3, OR)


# ---------------------------------------------------------------- theorem check


@dataclass(frozen=True)
class TheoremFailure:
    trial: int
    tree: str
    solve_cost: Fraction
    optimal: Fraction
    depth_first: Fraction


@dataclass
class VerifyReport:
    trials: int
    seed: int
    bounds: InstanceBounds
    failures: list[TheoremFailure] = field(default_factory=list)
    leaf_histogram: dict[int, int] = field(default_factory=dict)
    cost_sum: Fraction = Fraction(0)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def format(self) -> str:
        lines = [
            f"trials: {self.trials}",
            f"seed: {self.seed}",
            f"max-gates: {self.bounds.max_gates}",
            f"max-branch: {self.bounds.max_branch}",
            f"max-leaves: {self.bounds.max_leaves}",
            f"denominator: {self.bounds.denom}",
        ]
        for n in sorted(self.leaf_histogram):
            lines.append(f"instances-with-{n}-leaves: {self.leaf_histogram[n]}")
        lines.append(f"cost-sum: {format_fraction(self.cost_sum)}")
        lines.append(f"failures: {len(self.failures)}")
        for f in self.failures:
            lines.append(
                f"failure: trial={f.trial} tree={f.tree} solve={format_fraction(f.solve_cost)} "
                f"optimal={format_fraction(f.optimal)} depth-first={format_fraction(f.depth_first)}"
            )
        return "\n".join(lines) + "\n"


def check_instance(dist: IndependentDistribution) -> tuple[Fraction, Fraction, Fraction]:
    """(SOLVE_d cost, optimal cost, optimal depth-first cost) for one instance."""
    shape = dist.shape
    bound = len(shape.leaves)
    return (
        solve_d_cost(shape, dist),
        Oracle(shape, dist, max_leaves=bound).best_cost(),
        Oracle(shape, dist, depth_first=True, max_leaves=bound).best_cost(),
    )


def verify_theorem(trials: int, seed: int, bounds: InstanceBounds = InstanceBounds()) -> VerifyReport:
    """Check SOLVE_d cost = optimal cost = optimal depth-first cost on random instances."""
    start = time.perf_counter()
    rng = random.Random(seed)
    report = VerifyReport(trials, seed, bounds)
    for trial in range(trials):
        dist = random_height2_instance(rng, bounds)
        n = len(dist.shape.leaves)
        report.leaf_histogram[n] = report.leaf_histogram.get(n, 0) + 1
        solve, opt, df = check_instance(dist)
        report.cost_sum += solve
        if not solve == opt == df:
            report.failures.append(TheoremFailure(trial, format_tree(dist), solve, opt, df))
    report.elapsed = time.perf_counter() - start
    return report


# ---------------------------------------------------------------- depth-first directional minimum


@dataclass(frozen=True)
class DirectionalMinimum:
    solve_cost: Fraction
    best_cost: Fraction
    algorithms: int
    beaten_by: Optional[tuple[Path, ...]] = None

    @property
    def ok(self) -> bool:
        return self.beaten_by is None and self.solve_cost == self.best_cost


def compare_depth_first_directional(dist: IndependentDistribution) -> DirectionalMinimum:
    """SOLVE_d against every gate-order x leaf-order depth-first directional algorithm."""
    shape = dist.shape
    solve = expected_cost(priority_algorithm(shape, solve_order(shape, dist)), dist, check=False)
    best, count, beaten = None, 0, None
    for order in depth_first_directional_orders(shape):
        cost = expected_cost(priority_algorithm(shape, order), dist, check=False)
        count += 1
        if best is None or cost < best:
            best = cost
        if cost < solve and beaten is None:
            beaten = order
    return DirectionalMinimum(solve, best, count, beaten)


# ---------------------------------------------------------------- proof scenario


@dataclass(frozen=True)
class CaseScenario:
    """First probe ``x_{i,j}`` with the leaf sequences Y, X, Z around gate i.

    After ``x_{i,j} = 0`` the best continuation probes Y, X, Z in that order;
    after ``x_{i,j} = 1`` gate i is settled and it probes Y, Z.
    """

    dist: IndependentDistribution
    probe: Path
    y: tuple[Path, ...]
    x: tuple[Path, ...]
    z: tuple[Path, ...]
    y_gates: tuple[int, ...]
    z_gates: tuple[int, ...]

    @property
    def shape(self) -> TreeShape:
        return self.dist.shape

    @property
    def gate(self) -> int:
        return self.probe[0]

    def sub_cost(self, leaves: Sequence[Path]) -> Fraction:
        """Expected cost of the depth-first search over ``leaves`` alone."""
        if not leaves:
            return Fraction(0)
        keep = set(leaves)
        sub = self.shape.restrict([leaf for leaf in self.shape.leaves if leaf not in keep])
        return expected_cost(priority_algorithm(sub, leaves), self.dist.restrict(sub))

    @property
    def p_y(self) -> Fraction:
        """Probability that no gate in Y* is 0."""
        prob = Fraction(1)
        for g in self.y_gates:
            gate_zero = Fraction(1)
            for leaf in self.shape.leaves_under((g,)):
                gate_zero *= self.dist[leaf]
            prob *= 1 - gate_zero
        return prob

    @property
    def p_x(self) -> Fraction:
        """Probability that not every leaf of X is 0."""
        all_zero = Fraction(1)
        for leaf in self.x:
            all_zero *= self.dist[leaf]
        return 1 - all_zero


def make_case_scenario(dist: IndependentDistribution, probe: Path) -> CaseScenario:
    shape = dist.shape
    shape.check_leaf(probe)
    i = probe[0]
    if len(shape.nodes[(i,)].children) < 2:
        raise TreeError(f"gate {i} has a single leaf; the scenario needs a(i) >= 2")
    if len(shape.root.children) < 2:
        raise TreeError("the tree has a single gate; nothing remains once it is settled")
    t0 = shape.restrict([probe])
    t1 = shape.restrict([(i,)])
    order0 = solve_order(t0, dist.restrict(t0))
    order1 = solve_order(t1, dist.restrict(t1))
    first_x = next(k for k, leaf in enumerate(order0) if leaf[0] == i)
    a_i = len(t0.nodes[(i,)].children)
    y, x, z = order0[:first_x], order0[first_x : first_x + a_i], order0[first_x + a_i :]
    if order1 != y + z:
        raise AssertionError("continuation after x_{i,j}=1 does not follow Y then Z")

    def gates_of(seq: Sequence[Path]) -> tuple[int, ...]:
        return tuple(dict.fromkeys(leaf[0] for leaf in seq))

    return CaseScenario(dist, probe, y, x, z, gates_of(y), gates_of(z))


def build_case_algorithms(scn: CaseScenario) -> tuple[DecisionTree, DecisionTree]:
    """A probes x_{i,j} first; B runs the Y search before probing x_{i,j}."""
    if not scn.y or not scn.z:
        raise TreeError("both Y and Z must be nonempty")
    shape = scn.shape
    t0 = shape.restrict([scn.probe])
    t1 = shape.restrict([(scn.gate,)])
    a = Query(
        scn.probe,
        priority_algorithm(t0, scn.y + scn.x + scn.z),
        priority_algorithm(t1, scn.y + scn.z),
    )
    b = priority_algorithm(shape, scn.y + (scn.probe,) + scn.x + scn.z)
    return a, b


@dataclass(frozen=True)
class CaseIdentity:
    cost_a: Fraction
    cost_b: Fraction
    closed_a: Fraction
    closed_b: Fraction
    p_y: Fraction

    @property
    def difference(self) -> Fraction:
        return self.cost_a - self.cost_b

    @property
    def holds(self) -> bool:
        return (
            self.cost_a == self.closed_a
            and self.cost_b == self.closed_b
            and self.difference == 1 - self.p_y
            and self.p_y < 1
        )

    def format(self) -> str:
        rows = [
            ("cost-A", self.cost_a),
            ("cost-A-closed-form", self.closed_a),
            ("cost-B", self.cost_b),
            ("cost-B-closed-form", self.closed_b),
            ("p_Y", self.p_y),
            ("difference", self.difference),
            ("1-p_Y", 1 - self.p_y),
        ]
        lines = [f"{k}: {format_fraction(v)}" for k, v in rows]
        lines.append(f"identity: {'holds' if self.holds else 'FAILS'}")
        return "\n".join(lines) + "\n"


def case_cost_identity(scn: CaseScenario) -> CaseIdentity:
    """Cost of A and B from their decision trees and from the closed forms."""
    a, b = build_case_algorithms(scn)
    p = scn.dist[scn.probe]
    c_y, c_x, c_z = scn.sub_cost(scn.y), scn.sub_cost(scn.x), scn.sub_cost(scn.z)
    p_y, p_x = scn.p_y, scn.p_x
    closed_a = 1 + c_y + p * p_y * (c_x + p_x * c_z) + (1 - p) * p_y * c_z
    closed_b = c_y + p_y + p_y * p * (c_x + p_x * c_z) + p_y * (1 - p) * c_z
    return CaseIdentity(
        expected_cost(a, scn.dist), expected_cost(b, scn.dist), closed_a, closed_b, p_y
    )


def case_scenarios(dist: IndependentDistribution) -> Iterator[CaseScenario]:
    """Every scenario on ``dist`` with nonempty Y and Z."""
    for probe in dist.shape.leaves:
        if len(dist.shape.nodes[(probe[0],)].children) < 2 or len(dist.shape.root.children) < 2:
            continue
        scn = make_case_scenario(dist, probe)
        if scn.y and scn.z:
            yield scn


def random_case_scenarios(count: int, seed: int, bounds: InstanceBounds = InstanceBounds()) -> list[CaseScenario]:
    rng = random.Random(seed)
    out: list[CaseScenario] = []
    while len(out) < count:
        out.extend(case_scenarios(random_height2_instance(rng, bounds)))
    return out[:count]


# ---------------------------------------------------------------- height 3


@dataclass(frozen=True)
class GapWitness:
    dist: IndependentDistribution
    optimal: Optimum
    depth_first: Optimum
    first_probes: frozenset
    trial: int

    @property
    def gap(self) -> Fraction:
        return self.depth_first.cost - self.optimal.cost


@dataclass
class GapReport:
    trials_run: int
    seed: int
    denom: int
    witnesses: list[GapWitness] = field(default_factory=list)
    unconfirmed: list[str] = field(default_factory=list)

    def format(self) -> str:
        lines = [
            f"trials: {self.trials_run}",
            f"seed: {self.seed}",
            f"denominator: {self.denom}",
            f"witnesses: {len(self.witnesses)}",
        ]
        for k, w in enumerate(self.witnesses):
            probes = ",".join(format_path(p) for p in sorted(w.first_probes))
            lines.append(
                f"witness-{k}: trial={w.trial} tree={format_tree(w.dist)} "
                f"optimal={format_fraction(w.optimal.cost)} "
                f"depth-first={format_fraction(w.depth_first.cost)} gap={format_fraction(w.gap)} "
                f"optimal-first-probes={probes}"
            )
        lines.append(f"unconfirmed: {len(self.unconfirmed)}")
        lines.extend(f"unconfirmed-witness: {u}" for u in self.unconfirmed)
        return "\n".join(lines) + "\n"


def find_gap(dist: IndependentDistribution, trial: int = 0) -> Optional[GapWitness]:
    """Witness if no optimal algorithm for ``dist`` is depth-first."""
    shape = dist.shape
    n = len(shape.leaves)
    free = Oracle(shape, dist, max_leaves=n)
    df = Oracle(shape, dist, depth_first=True, max_leaves=n)
    if free.best_cost() >= df.best_cost():
        return None
    costs = free.first_probe_costs()
    best = min(costs.values())
    first = frozenset(leaf for leaf, c in costs.items() if c == best)
    return GapWitness(dist, free.optimum(), df.optimum(), first, trial)


def confirm_witness(w: GapWitness) -> list[str]:
    """Re-derive a witness's claims; returns the problems found."""
    problems = []
    shape = w.dist.shape
    if not w.gap > 0:
        problems.append("gap is not positive")
    if is_depth_first(w.optimal.strategy, shape):
        problems.append("extracted optimum is depth-first")
    if expected_cost(w.optimal.strategy, w.dist) != w.optimal.cost:
        problems.append("extracted optimum does not achieve the optimal cost")
    # nothing is open before the first probe, so a depth-first algorithm may
    # start anywhere; from each optimal start it must still lose
    df_start = Oracle(shape, w.dist, depth_first=True, max_leaves=len(shape.leaves)).first_probe_costs()
    for leaf in w.first_probes:
        if not df_start[leaf] > w.optimal.cost:
            problems.append(f"a depth-first algorithm starting at {format_path(leaf)} is optimal")
    _, again = parse_tree(format_tree(w.dist))
    replay = find_gap(again, w.trial)
    if replay is None or replay.gap != w.gap:
        problems.append("gap changes after a round trip through the tree format")
    return problems


def gap_search(
    trials: int,
    seed: int,
    denom: int = 16,
    max_witnesses: Optional[int] = None,
    shape: Optional[TreeShape] = None,
) -> GapReport:
    """Sample admissible distributions on a tree and collect depth-first gaps.

    Stops early once ``max_witnesses`` have been found.
    """
    shape = shape or height3_shape()
    rng = random.Random(seed)
    report = GapReport(0, seed, denom)
    for trial in range(trials):
        report.trials_run = trial + 1
        dist = IndependentDistribution(shape, random_probs(rng, len(shape.leaves), denom))
        w = find_gap(dist, trial)
        if w is None:
            continue
        problems = confirm_witness(w)
        if problems:
            report.unconfirmed.append(f"trial={trial} " + "; ".join(problems))
            continue
        report.witnesses.append(w)
        if max_witnesses is not None and len(report.witnesses) >= max_witnesses:
            break
    return report


def optimal_costs_agree(dist: IndependentDistribution) -> bool:
    n = len(dist.shape.leaves)
    return (
        Oracle(dist.shape, dist, max_leaves=n).best_cost()
        == Oracle(dist.shape, dist, depth_first=True, max_leaves=n).best_cost()
    )


@dataclass(frozen=True)
class PriorityDemo:
    y: tuple[Path, ...]
    gate: Path
    prob_gate_zero: Fraction
    outcomes: tuple[tuple[tuple[int, ...], Optional[int], Optional[int]], ...]

    @property
    def holds(self) -> bool:
        return self.prob_gate_zero > 0 and all(root is None for _, _, root in self.outcomes)

    def format(self) -> str:
        lines = [
            "Y: " + ",".join(format_path(p) for p in self.y),
            f"event: {format_path(self.gate)} has value 0",
            f"event-probability: {format_fraction(self.prob_gate_zero)}",
        ]
        for values, gate, root in self.outcomes:
            assigned = " ".join(f"{format_path(l)}={v}" for l, v in zip(self.y, values))
            gate_s = "unknown" if gate is None else str(gate)
            root_s = "unknown" if root is None else str(root)
            lines.append(f"outcome: {assigned} -> {format_path(self.gate)}={gate_s} root={root_s}")
        settled = sum(root is not None for _, _, root in self.outcomes)
        lines.append(f"outcomes-settling-root: {settled}")
        lines.append(f"conclusion: {'event does not decide the root' if self.holds else 'UNEXPECTED'}")
        return "\n".join(lines) + "\n"


def height3_priority_demo(dist: Optional[IndependentDistribution] = None) -> PriorityDemo:
    """Probing x_{100} then x_{101} on the height-3 tree never settles the root,
    although the event "x_{10} = 0" has positive probability."""
    if dist is None:
        dist = IndependentDistribution.iid(height3_shape(), Fraction(1, 2))
    shape = dist.shape
    if shape != height3_shape():
        raise TreeError("the demonstration needs the complete binary OR-AND tree of height 3")
    dist.require_admissible()
    y = ((1, 0, 0), (1, 0, 1))
    gate = (1, 0)
    prob = Fraction(0)
    outcomes = []
    for values in ((0, 0), (0, 1), (1, 0), (1, 1)):
        res = resolve(shape, KnowledgeState.of(dict(zip(y, values))))
        weight = Fraction(1)
        for leaf, v in zip(y, values):
            weight *= dist[leaf] if v == 0 else 1 - dist[leaf]
        if res[gate] == 0:
            prob += weight
        outcomes.append((values, res[gate], res[()]))
    return PriorityDemo(y, gate, prob, tuple(outcomes))
