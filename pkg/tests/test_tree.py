from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from andortree.tree import (
    AND,
    OR,
    IndependentDistribution,
    KnowledgeState,
    Node,
    TreeError,
    TreeShape,
    build_shape,
    evaluate,
    relevant_leaves,
    resolve,
)
from andortree.treefile import parse_tree

from conftest import small_instances
from helpers import all_assignments


def all_states(shape):
    for values in product((None, 0, 1), repeat=len(shape.leaves)):
        yield KnowledgeState.of({l: v for l, v in zip(shape.leaves, values) if v is not None})


def test_paths_follow_document_order():
    shape, _ = parse_tree("(and (or 1/2) (or 1/2 2/3))")
    assert shape.leaves == ((0, 0), (1, 0), (1, 1))
    assert len(shape.root.children) == 2
    assert shape.height == 2


def test_bare_leaf_under_and_root_becomes_single_leaf_gate():
    shape, dist = parse_tree("(and 1/3 (or 1/4 1/5))")
    assert shape.nodes[(0,)].kind == OR
    assert shape.leaves == ((0, 0), (1, 0), (1, 1))
    assert dist[(0, 0)] == Fraction(1, 3)


def test_alternation_enforced():
    with pytest.raises(TreeError):
        TreeShape(Node(AND, (), (Node(AND, (0,), (Node("leaf", (0, 0)),)),)))


def test_duplicate_and_misplaced_paths_rejected():
    leaf = Node("leaf", (0,))
    with pytest.raises(TreeError):
        TreeShape(Node(OR, (), (leaf, leaf)))
    with pytest.raises(TreeError):
        TreeShape(Node(OR, (), (Node("leaf", (3, 1)),)))


def test_resolve_and_annihilator():
    shape, _ = parse_tree("(and (or 1/2) (or 1/2 1/2))")
    res = resolve(shape, KnowledgeState.of({(0, 0): 0}))
    assert res[(0,)] == 0
    assert res[()] == 0


def test_resolve_or_exhausted():
    shape, _ = parse_tree("(and (or 1/2) (or 1/2 1/2))")
    res = resolve(shape, KnowledgeState.of({(1, 0): 0, (1, 1): 0}))
    assert res[(1,)] == 0


def test_resolve_empty_state_all_unknown():
    shape, _ = parse_tree("(or (and (or 1/2 1/2) 1/3) (and 1/2 1/2))")
    assert set(resolve(shape, KnowledgeState()).values()) == {None}


def test_resolve_rejects_unknown_leaf():
    shape, _ = parse_tree("(and (or 1/2))")
    with pytest.raises(TreeError):
        resolve(shape, KnowledgeState.of({(5, 0): 1}))


def test_relevant_leaves_examples():
    shape, _ = parse_tree("(and (or 1/2) (or 1/2 1/2 1/2))")
    assert relevant_leaves(shape, KnowledgeState()) == shape.leaves
    # x_{1,0} = 1 settles gate 1; its other leaves drop out
    assert relevant_leaves(shape, KnowledgeState.of({(1, 0): 1})) == ((0, 0),)
    assert relevant_leaves(shape, KnowledgeState.of({(0, 0): 0})) == ()


def test_distribution_predicates():
    shape, dist = parse_tree("(and (or 0 1/2) (or 1))")
    assert not dist.is_admissible()
    assert IndependentDistribution.iid(shape, Fraction(1, 3)).is_iid()
    assert not IndependentDistribution(shape, (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2))).is_iid()
    with pytest.raises(TreeError):
        IndependentDistribution(shape, (Fraction(1, 2),))
    with pytest.raises(TreeError):
        IndependentDistribution(shape, (Fraction(1, 2), Fraction(3, 2), Fraction(1, 2)))


def test_restrict_keeps_indices_and_drops_empty_gates():
    shape, _ = parse_tree("(and (or 1/2) (or 1/2 1/3) (or 1/4))")
    t0 = shape.restrict([(1, 0)])
    assert t0.leaves == ((0, 0), (1, 1), (2, 0))
    t1 = shape.restrict([(1,)])
    assert [g.path for g in t1.root.children] == [(0,), (2,)]
    assert shape.restrict([(0, 0)]).leaves == ((1, 0), (1, 1), (2, 0))
    with pytest.raises(TreeError):
        shape.restrict([(0,), (1,), (2,)])


def test_balanced():
    assert parse_tree("(or (and 1/2 1/2) (and 1/2 1/2))")[0].is_balanced()
    assert not parse_tree("(and (or 1/2) (or 1/2 1/2))")[0].is_balanced()


@given(small_instances())
def test_full_assignment_resolves_to_boolean_value(dist):
    shape = dist.shape
    for assignment in all_assignments(shape):
        res = resolve(shape, KnowledgeState.of(assignment))
        assert res[()] == evaluate(shape, assignment)
        assert None not in res.values()


@given(small_instances(max_leaves=5), st.randoms(use_true_random=False))
def test_resolve_is_monotone(dist, rng):
    shape = dist.shape
    for state in all_states(shape):
        before = resolve(shape, state)
        free = [l for l in shape.leaves if l not in state]
        if not free:
            continue
        leaf = rng.choice(free)
        after = resolve(shape, state.with_value(leaf, rng.randint(0, 1)))
        assert all(after[p] == v for p, v in before.items() if v is not None)
        assert resolve(shape, state) == before


@given(small_instances(max_leaves=6))
def test_no_relevant_leaves_iff_root_resolved(dist):
    shape = dist.shape
    for state in all_states(shape):
        root = resolve(shape, state)[()]
        assert (relevant_leaves(shape, state) == ()) == (root is not None)


fractions = st.fractions(min_value=-10, max_value=10, max_denominator=50)


@given(fractions, fractions, fractions)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a < b) == (a.numerator * b.denominator < b.numerator * a.denominator)
    assert a.denominator > 0
    if b != 0:
        assert (a / b) * b == a


def test_build_shape_nested():
    shape = build_shape(OR, [(AND, [None, (OR, [None, None])]), None])
    assert shape.leaves == ((0, 0), (0, 1, 0), (0, 1, 1), (1,))
    assert shape.height == 3
