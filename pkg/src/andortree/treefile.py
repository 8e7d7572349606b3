"""Reading and writing tree files and decision-tree files.

Tree files are s-expressions such as ``(and (or 1/2) (or 1/2 2/3))``; each
number is a leaf's probability of having value 0. Decision trees are written
as ``(ask 1.0 0 (ask 1.1 0 1))`` where the first branch follows a 0 answer.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction

from .cost import DecisionTree, Query, Terminal
from .tree import AND, OR, IndependentDistribution, Node, TreeShape, build_shape, format_path, parse_path


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def tokenize(text: str) -> list[Token]:
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
    tokens = []
    for m in _TOKEN.finditer(text):
        line = bisect.bisect_right(line_starts, m.start())
        tokens.append(Token(m.group(), line, m.start() - line_starts[line - 1] + 1))
    return tokens


_FRACTION = re.compile(r"^[+-]?\d+/\d+$")
_INTEGER = re.compile(r"^[+-]?\d+$")
_DECIMAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)$")


def parse_probability(tok: Token) -> Fraction:
    text = tok.text
    if _FRACTION.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise TreeSyntaxError(f"zero denominator in {text!r}", tok.line, tok.column)
        value = Fraction(int(num), int(den))
    elif _INTEGER.match(text) or _DECIMAL.match(text):
        value = Fraction(text)
    else:
        raise TreeSyntaxError(f"expected a probability, got {text!r}", tok.line, tok.column)
    if not 0 <= value <= 1:
        raise TreeSyntaxError(f"probability {text} out of range [0, 1]", tok.line, tok.column)
    return value


class _Reader:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        lines = text.split("\n")
        self.eof = (len(lines), len(lines[-1]) + 1)

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise TreeSyntaxError(f"unexpected end of input, expected {what}", *self.eof)
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise TreeSyntaxError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.column)
        return tok

    def finish(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise TreeSyntaxError(f"trailing input {tok.text!r}", tok.line, tok.column)


def parse_tree(text: str) -> tuple[TreeShape, IndependentDistribution]:
    """Parse a tree file.

    Probabilities 0 and 1 are accepted here; use
    ``IndependentDistribution.is_admissible`` to reject them later.
    """
    reader = _Reader(text)
    probs: list[Fraction] = []

    def read_gate():
        reader.expect("(")
        kind_tok = reader.next("gate kind")
        if kind_tok.text not in (AND, OR):
            raise TreeSyntaxError(
                f"expected 'and' or 'or', got {kind_tok.text!r}", kind_tok.line, kind_tok.column
            )
        children = []
        while True:
            tok = reader.peek()
            if tok is None:
                reader.next("')'")
            if tok.text == ")":
                reader.pos += 1
                break
            if tok.text == "(":
                sub = read_gate()
                if sub[0] == kind_tok.text:
                    raise TreeSyntaxError(
                        f"gate kinds must alternate, nested {sub[0]!r} under {kind_tok.text!r}",
                        tok.line,
                        tok.column,
                    )
                children.append(sub)
            else:
                reader.pos += 1
                probs.append(parse_probability(tok))
                children.append(None)
        if not children:
            raise TreeSyntaxError("gate without children", kind_tok.line, kind_tok.column)
        return (kind_tok.text, children)

    kind, children = read_gate()
    reader.finish()
    shape = build_shape(kind, children)
    # build_shape keeps document order of leaves, so probabilities line up
    return shape, IndependentDistribution(shape, tuple(probs))


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_tree(dist: IndependentDistribution) -> str:
    """Canonical single-line form of a tree with its probabilities."""

    def render(node: Node) -> str:
        if node.is_leaf:
            return format_fraction(dist[node.path])
        return "(" + " ".join([node.kind] + [render(c) for c in node.children]) + ")"

    return render(dist.shape.root)


def parse_decision_tree(text: str) -> DecisionTree:
    reader = _Reader(text)

    def read() -> DecisionTree:
        tok = reader.next("a decision tree")
        if tok.text in ("0", "1"):
            return Terminal(int(tok.text))
        if tok.text != "(":
            raise TreeSyntaxError(f"expected '0', '1' or '(', got {tok.text!r}", tok.line, tok.column)
        reader.expect("ask")
        path_tok = reader.next("a leaf path")
        if not re.fullmatch(r"\d+(\.\d+)*", path_tok.text):
            raise TreeSyntaxError(f"malformed leaf path {path_tok.text!r}", path_tok.line, path_tok.column)
        on_zero = read()
        on_one = read()
        reader.expect(")")
        return Query(parse_path(path_tok.text), on_zero, on_one)

    alg = read()
    reader.finish()
    return alg


def format_decision_tree(alg: DecisionTree) -> str:
    parts: list[str] = []

    def render(node: DecisionTree) -> None:
        if isinstance(node, Terminal):
            parts.append(str(node.value))
            return
        parts.append(f"(ask {format_path(node.leaf)} ")
        render(node.on_zero)
        parts.append(" ")
        render(node.on_one)
        parts.append(")")

    render(alg)
    return "".join(parts)


def read_tree_file(path) -> tuple[TreeShape, IndependentDistribution]:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


def read_decision_tree_file(path) -> DecisionTree:
    with open(path, encoding="utf-8") as fh:
        return parse_decision_tree(fh.read())
