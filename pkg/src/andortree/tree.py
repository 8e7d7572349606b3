"""AND-OR tree shapes, independent leaf distributions and knowledge states.

Nodes are addressed by index paths: the root is ``()``, its children are
``(0,), (1,), ...`` and the leaves under child ``i`` are ``(i, 0), (i, 1), ...``.
Deeper trees simply extend the paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

Rational = Fraction
Path = tuple[int, ...]

AND = "and"
OR = "or"
LEAF = "leaf"


class TreeError(ValueError):
    """Structural problem with a tree, a path or a distribution."""


def format_path(path: Path) -> str:
    if not path:
        return "root"
    return ".".join(str(i) for i in path)


def parse_path(text: str) -> Path:
    try:
        return tuple(int(part) for part in text.split("."))
    except ValueError:
        raise TreeError(f"malformed leaf path {text!r}") from None


@dataclass(frozen=True)
class Node:
    kind: str
    path: Path
    children: tuple["Node", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.kind == LEAF

    def walk(self) -> Iterator["Node"]:
        """Pre-order traversal (document order)."""
        yield self
        for child in self.children:
            yield from child.walk()


# Nested description accepted by build_shape: ``None`` is a leaf, a gate is
# ``(kind, [child, ...])``.
ShapeSpec = Union[None, tuple]


def build_shape(kind: str, children: Sequence[ShapeSpec]) -> "TreeShape":
    """Build a dense-indexed shape from a nested description.

    Bare leaves directly under an AND root are wrapped in single-leaf OR
    gates, so every height-2 tree has the uniform ``x_{i,j}`` layout.
    """

    def make(spec: ShapeSpec, path: Path, parent_kind: Optional[str]) -> Node:
        if spec is None:
            if parent_kind == AND and len(path) == 1:
                return Node(OR, path, (Node(LEAF, path + (0,)),))
            return Node(LEAF, path)
        gate_kind, kids = spec
        return Node(
            gate_kind,
            path,
            tuple(make(k, path + (n,), gate_kind) for n, k in enumerate(kids)),
        )

    return TreeShape(make((kind, list(children)), (), None))


@dataclass(frozen=True)
class TreeShape:
    """An AND/OR tree whose internal nodes alternate gate kinds.

    Paths need not be dense: restricted shapes keep the indices of the tree
    they were cut from.
    """

    root: Node

    def __post_init__(self) -> None:
        if self.root.is_leaf:
            raise TreeError("the root must be a gate")
        if self.root.path != ():
            raise TreeError("the root must have the empty path")
        seen: set[Path] = set()
        for node in self.root.walk():
            if node.path in seen:
                raise TreeError(f"duplicate path {format_path(node.path)}")
            seen.add(node.path)
            if node.is_leaf:
                if node.children:
                    raise TreeError(f"leaf {format_path(node.path)} has children")
                continue
            if node.kind not in (AND, OR):
                raise TreeError(f"unknown gate kind {node.kind!r}")
            if not node.children:
                raise TreeError(f"gate {format_path(node.path)} has no children")
            for child in node.children:
                if len(child.path) != len(node.path) + 1 or child.path[:-1] != node.path:
                    raise TreeError(
                        f"child path {format_path(child.path)} is not under {format_path(node.path)}"
                    )
                if not child.is_leaf and child.kind == node.kind:
                    raise TreeError(
                        f"gate kinds must alternate: {format_path(child.path)} repeats {node.kind}"
                    )

    @cached_property
    def nodes(self) -> dict[Path, Node]:
        return {node.path: node for node in self.root.walk()}

    @cached_property
    def leaves(self) -> tuple[Path, ...]:
        """Leaf paths in document order."""
        return tuple(n.path for n in self.root.walk() if n.is_leaf)

    @cached_property
    def gates(self) -> tuple[Path, ...]:
        return tuple(n.path for n in self.root.walk() if not n.is_leaf)

    @cached_property
    def leaf_index(self) -> dict[Path, int]:
        return {path: i for i, path in enumerate(self.leaves)}

    @cached_property
    def height(self) -> int:
        return max(len(path) for path in self.leaves)

    @property
    def kind(self) -> str:
        return self.root.kind

    def __len__(self) -> int:
        return len(self.leaves)

    def is_leaf(self, path: Path) -> bool:
        node = self.nodes.get(path)
        return node is not None and node.is_leaf

    def check_leaf(self, path: Path) -> None:
        if not self.is_leaf(path):
            raise TreeError(f"{format_path(path)} is not a leaf of the tree")

    def leaves_under(self, path: Path) -> tuple[Path, ...]:
        return tuple(n.path for n in self.nodes[path].walk() if n.is_leaf)

    def is_balanced(self) -> bool:
        """Equal branching at equal depth and all leaves at the same depth."""
        degree: dict[int, int] = {}
        for node in self.root.walk():
            if node.is_leaf:
                if len(node.path) != self.height:
                    return False
                continue
            if degree.setdefault(len(node.path), len(node.children)) != len(node.children):
                return False
        return True

    def restrict(self, removed: Iterable[Path]) -> "TreeShape":
        """Remove the given nodes (with descendants), keeping original paths.

        Gates left without children disappear as well.
        """
        removed = set(removed)
        for path in removed:
            if path not in self.nodes or path == ():
                raise TreeError(f"cannot remove {format_path(path)}")

        def prune(node: Node) -> Optional[Node]:
            if node.path in removed:
                return None
            if node.is_leaf:
                return node
            kept = tuple(c for c in (prune(ch) for ch in node.children) if c is not None)
            if not kept:
                return None
            return Node(node.kind, node.path, kept)

        root = prune(self.root)
        if root is None:
            raise TreeError("restriction leaves an empty tree")
        return TreeShape(root)


@dataclass(frozen=True)
class IndependentDistribution:
    """Probability that each leaf has value 0, leaves independent."""

    shape: TreeShape
    zero_probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.zero_probs) != len(self.shape.leaves):
            raise TreeError(
                f"{len(self.zero_probs)} probabilities for {len(self.shape.leaves)} leaves"
            )
        for path, p in zip(self.shape.leaves, self.zero_probs):
            if not isinstance(p, Fraction):
                raise TreeError(f"probability of {format_path(path)} must be a Fraction")
            if not 0 <= p <= 1:
                raise TreeError(f"probability {p} of {format_path(path)} outside [0, 1]")

    @classmethod
    def from_mapping(cls, shape: TreeShape, probs: Mapping[Path, Fraction]) -> "IndependentDistribution":
        extra = set(probs) - set(shape.leaves)
        if extra:
            raise TreeError(f"probabilities for unknown leaves: {sorted(extra)}")
        try:
            return cls(shape, tuple(Fraction(probs[leaf]) for leaf in shape.leaves))
        except KeyError as exc:
            raise TreeError(f"missing probability for {format_path(exc.args[0])}") from None

    @classmethod
    def iid(cls, shape: TreeShape, p: Fraction) -> "IndependentDistribution":
        return cls(shape, (Fraction(p),) * len(shape.leaves))

    def __getitem__(self, leaf: Path) -> Fraction:
        try:
            return self.zero_probs[self.shape.leaf_index[leaf]]
        except KeyError:
            raise TreeError(f"{format_path(leaf)} is not a leaf of the tree") from None

    def as_dict(self) -> dict[Path, Fraction]:
        return dict(zip(self.shape.leaves, self.zero_probs))

    def is_admissible(self) -> bool:
        return all(0 < p < 1 for p in self.zero_probs)

    def is_iid(self) -> bool:
        return len(set(self.zero_probs)) <= 1

    def restrict(self, shape: TreeShape) -> "IndependentDistribution":
        """The same distribution on a restriction of the tree."""
        return IndependentDistribution(shape, tuple(self[leaf] for leaf in shape.leaves))

    def require_admissible(self) -> None:
        for path, p in zip(self.shape.leaves, self.zero_probs):
            if not 0 < p < 1:
                raise TreeError(
                    f"probability {p} of leaf {format_path(path)} must lie strictly between 0 and 1"
                )


@dataclass(frozen=True)
class KnowledgeState:
    """Values observed so far for some leaves."""

    items: tuple[tuple[Path, int], ...] = ()

    @classmethod
    def of(cls, values: Mapping[Path, int]) -> "KnowledgeState":
        for path, v in values.items():
            if v not in (0, 1):
                raise TreeError(f"leaf value must be 0 or 1, got {v!r}")
        return cls(tuple(sorted(values.items())))

    def as_dict(self) -> dict[Path, int]:
        return dict(self.items)

    def get(self, leaf: Path) -> Optional[int]:
        for path, v in self.items:
            if path == leaf:
                return v
        return None

    def __contains__(self, leaf: Path) -> bool:
        return any(path == leaf for path, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def with_value(self, leaf: Path, value: int) -> "KnowledgeState":
        values = self.as_dict()
        if leaf in values:
            raise TreeError(f"leaf {format_path(leaf)} already assigned")
        values[leaf] = value
        return KnowledgeState.of(values)


Resolution = dict[Path, Optional[int]]


def resolve(shape: TreeShape, state: KnowledgeState) -> Resolution:
    """Value of every node implied by the observed leaves (None if open)."""
    values = state.as_dict()
    for leaf in values:
        shape.check_leaf(leaf)
    out: Resolution = {}

    def visit(node: Node) -> Optional[int]:
        if node.is_leaf:
            v = values.get(node.path)
        else:
            child_values = [visit(c) for c in node.children]
            absorbing = 0 if node.kind == AND else 1
            if absorbing in child_values:
                v = absorbing
            elif all(cv is not None for cv in child_values):
                v = 1 - absorbing
            else:
                v = None
        out[node.path] = v
        return v

    visit(shape.root)
    return out


def relevant_leaves(shape: TreeShape, state: KnowledgeState) -> tuple[Path, ...]:
    """Unassigned leaves whose probing can still affect the root."""
    resolution = resolve(shape, state)
    relevant = []
    for leaf in shape.leaves:
        if resolution[leaf] is not None:
            continue
        if all(resolution[leaf[:k]] is None for k in range(len(leaf))):
            relevant.append(leaf)
    return tuple(relevant)


def evaluate(shape: TreeShape, assignment: Mapping[Path, int]) -> int:
    """Plain Boolean value of the root under a full assignment."""

    def visit(node: Node) -> int:
        if node.is_leaf:
            return assignment[node.path]
        vals = [visit(c) for c in node.children]
        return int(all(vals)) if node.kind == AND else int(any(vals))

    return visit(shape.root)


def assignment_probability(dist: IndependentDistribution, assignment: Mapping[Path, int]) -> Fraction:
    prob = Fraction(1)
    for leaf, p in zip(dist.shape.leaves, dist.zero_probs):
        prob *= p if assignment[leaf] == 0 else 1 - p
    return prob
