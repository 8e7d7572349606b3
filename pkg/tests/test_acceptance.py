"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from andortree.cost import brute_force_cost, expected_cost, is_depth_first, validate
from andortree.experiments import (
    InstanceBounds,
    case_cost_identity,
    compare_depth_first_directional,
    confirm_witness,
    gap_search,
    height3_shape,
    random_case_scenarios,
    random_height2_instance,
    random_probs,
    verify_theorem,
)
from andortree.oracle import optimal_cost, optimal_depth_first_cost
from andortree.solve import build_solve_d, check_height_two, gate_summary
from andortree.tree import IndependentDistribution, TreeError
from andortree.treefile import parse_tree

from helpers import all_decision_trees, gate_min_cost, random_decision_tree

F = Fraction


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


def test_criterion_1_solve_equals_both_optima(report):
    result = verify_theorem(1000, seed=42, bounds=InstanceBounds(max_leaves=10, denom=16))
    ok = result.ok and result.trials == 1000 and result.elapsed < 60
    report(1, ok, f"{result.trials} instances, {len(result.failures)} failures, {result.elapsed:.1f}s")


def test_criterion_2_solve_beats_every_depth_first_directional_order(report):
    rng = random.Random(2)
    start = time.perf_counter()
    bad, algorithms = [], 0
    for _ in range(100):
        dist = random_height2_instance(rng, InstanceBounds(max_leaves=8))
        check = compare_depth_first_directional(dist)
        algorithms += check.algorithms
        if not check.ok:
            bad.append(dist)
    elapsed = time.perf_counter() - start
    report(2, not bad and elapsed < 60, f"100 instances, {algorithms} algorithms, {len(bad)} beaten, {elapsed:.1f}s")


def test_criterion_3_case_identity(report):
    scenarios = random_case_scenarios(100, seed=3)
    results = [case_cost_identity(s) for s in scenarios]
    ok = len(results) == 100 and all(r.holds and 1 - r.p_y > 0 for r in results)
    report(3, ok, f"{len(results)} scenarios, {sum(r.holds for r in results)} hold")


def test_criterion_4_gate_cost_is_minimum(report):
    rng = random.Random(4)
    wrong = 0
    for _ in range(500):
        probs = random_probs(rng, rng.randint(1, 6), 16)
        if gate_summary(probs).cost != gate_min_cost(probs):
            wrong += 1
    report(4, wrong == 0, f"500 gates, {wrong} mismatches")


def test_criterion_5_height_three_gap(report):
    start = time.perf_counter()
    result = gap_search(100_000, seed=5, max_witnesses=1)
    elapsed = time.perf_counter() - start
    ok = bool(result.witnesses) and not result.unconfirmed and elapsed < 600
    if ok:
        w = result.witnesses[0]
        ok = w.gap > 0 and not is_depth_first(w.optimal.strategy, w.dist.shape) and confirm_witness(w) == []
        detail = f"gap {w.gap} after {result.trials_run} trials, {elapsed:.1f}s"
    else:
        detail = f"no confirmed witness in {result.trials_run} trials"
    report(5, ok, detail)


def test_criterion_6_iid_has_depth_first_optimum(report):
    rng = random.Random(6)
    values = [F(1, 2)]
    while len(values) < 11:
        p = F(rng.randint(1, 99), 100)
        if p not in values:
            values.append(p)
    shape = height3_shape()
    gaps = []
    for p in values:
        dist = IndependentDistribution.iid(shape, p)
        if optimal_cost(shape, dist).cost != optimal_depth_first_cost(shape, dist).cost:
            gaps.append(p)
    report(6, not gaps, f"{len(values)} IID values, {len(gaps)} with a gap")


CORPUS = [
    "(and (or 1/2))",
    "(or 1/3 2/3)",
    "(and 1/4 3/4 1/2)",
    "(and (or 1/2) (or 1/2 1/2))",
    "(or (and 1/3 1/5) (and 2/7 1/2))",
    "(and (or 1/3 (and 1/4 1/5)) (or 7/8))",
    "(and (or 1/2 1/3) (or 1/4) (or 1/5 1/6))",
    "(or (and 1/2 (or 1/3 1/4)) (and 3/5 2/3))",
    "(and (or 1/16 15/16 1/2) (or 3/8 5/8 1/3))",
    "(or (and (or 1/2 1/4) (or 1/3 1/5)) (and 2/3 3/4))",
]


def test_criterion_7_evaluator_soundness(report):
    rng = random.Random(7)
    checked, mismatched = 0, 0
    for text in CORPUS:
        shape, dist = parse_tree(text)
        if len(shape.leaves) <= 4:
            algs = list(all_decision_trees(shape))
        else:
            algs = [optimal_cost(shape, dist).strategy, optimal_depth_first_cost(shape, dist).strategy]
            try:
                check_height_two(shape)
                algs.append(build_solve_d(shape, dist))
            except TreeError:
                pass
            algs += [random_decision_tree(shape, rng) for _ in range(300)]
        for alg in algs:
            if validate(alg, shape):
                continue
            checked += 1
            if expected_cost(alg, dist) != brute_force_cost(alg, dist):
                mismatched += 1
    report(7, checked > 0 and mismatched == 0, f"{checked} decision trees over {len(CORPUS)} trees, {mismatched} mismatches")


def test_criterion_8_verify_is_deterministic(report):
    # two separate processes, so no state can leak between the runs
    argv = [sys.executable, "-m", "andortree", "verify", "--trials", "100", "--seed", "7"]
    runs = [subprocess.run(argv, capture_output=True, check=False) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout
    ok = same and all(r.returncode == 0 for r in runs) and b"failures: 0" in runs[0].stdout
    report(8, ok, f"{len(runs[0].stdout)} bytes, identical={same}")
