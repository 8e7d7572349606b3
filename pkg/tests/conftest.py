import os
import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

from andortree.tree import AND, OR, IndependentDistribution, build_shape

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DENOM = 16


def probabilities(denom: int = DENOM):
    return st.integers(1, denom - 1).map(lambda k: Fraction(k, denom))


@st.composite
def height2_instances(draw, max_gates=4, max_branch=3, max_leaves=8):
    sizes = draw(
        st.lists(st.integers(1, max_branch), min_size=1, max_size=max_gates).filter(
            lambda s: 2 <= sum(s) <= max_leaves
        )
    )
    shape = build_shape(AND, [(OR, [None] * a) for a in sizes])
    probs = draw(st.lists(probabilities(), min_size=len(shape.leaves), max_size=len(shape.leaves)))
    return IndependentDistribution(shape, tuple(probs))


@st.composite
def gate_specs(draw, kind, depth, budget):
    """Nested description of a gate with at most ``budget`` leaves."""
    other = AND if kind == OR else OR
    n = draw(st.integers(1, min(3, budget)))
    children = []
    remaining = budget
    for k in range(n):
        share = max(1, remaining - (n - k - 1))
        if depth > 1 and share >= 1 and draw(st.booleans()):
            child = draw(gate_specs(other, depth - 1, draw(st.integers(1, share))))
        else:
            child = None
        used = _count(child)
        remaining -= used
        children.append(child)
        if remaining < n - k - 1:
            break
    return (kind, children)


def _count(spec):
    if spec is None:
        return 1
    return sum(_count(c) for c in spec[1])


@st.composite
def small_instances(draw, max_leaves=6, max_height=3):
    """Arbitrary AND/OR trees (either root kind) with admissible probabilities."""
    kind = draw(st.sampled_from([AND, OR]))
    spec = draw(gate_specs(kind, max_height, max_leaves).filter(lambda s: _count(s) <= max_leaves))
    shape = build_shape(kind, spec[1])
    probs = draw(st.lists(probabilities(), min_size=len(shape.leaves), max_size=len(shape.leaves)))
    return IndependentDistribution(shape, tuple(probs))
