"""Ordered labeled rooted trees: model, text format, equality and statistics.

The text format is a labeled-parenthesis grammar::

    Tree := Label | Label '(' Tree (',' Tree)* ')'

Labels are non-empty tokens over [A-Za-z0-9_].  Whitespace outside tokens is
ignored on input and never produced on output, so serialization is canonical.
Files holding a single tree in this format use the ".bp" extension.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

_TOKEN_CHARS = frozenset(string.ascii_letters + string.digits + "_")


class TreeSyntaxError(ValueError):
    """Malformed tree text; carries the character offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


def is_valid_label(label: str) -> bool:
    return bool(label) and all(c in _TOKEN_CHARS for c in label)


class LabeledTree:
    """Rooted ordered tree; node ids are indices into the label array.

    Child order is significant everywhere.  Instances are treated as
    immutable after construction and are safe to share across threads.
    """

    __slots__ = ("labels", "children", "parent", "root")

    def __init__(self, labels: list[str], children: list[list[int]],
                 root: int = 0, validate: bool = True):
        n = len(labels)
        if n == 0:
            raise ValueError("a tree must have at least one node")
        if len(children) != n:
            raise ValueError("labels and children must have equal length")
        if not 0 <= root < n:
            raise ValueError("root id out of range")
        if validate:
            for lb in labels:
                if not is_valid_label(lb):
                    raise ValueError(f"invalid label {lb!r}")
        parent = [-1] * n
        for u, ch in enumerate(children):
            for c in ch:
                if not 0 <= c < n:
                    raise ValueError(f"child id {c} out of range")
                if parent[c] != -1 or c == root:
                    raise ValueError(f"node {c} has more than one parent")
                parent[c] = u
        # reachability from the root rules out disconnected cycles
        seen = 1
        stack = [root]
        while stack:
            for c in children[stack.pop()]:
                seen += 1
                stack.append(c)
        if seen != n:
            raise ValueError("tree is not connected")
        self.labels = labels
        self.children = children
        self.parent = parent
        self.root = root

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.labels) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return trees_equal(self, other)

    __hash__ = None  # mutable payload; identity hashing would be a trap

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"LabeledTree({serialize_tree(self)!r})"
        return f"LabeledTree(<{self.n} nodes>)"


def parse_tree(text: str) -> LabeledTree:
    """Parse labeled-parenthesis text into a tree.

    Children appear in textual order.  Raises TreeSyntaxError with a
    position on malformed input, including empty input.
    """
    labels: list[str] = []
    children: list[list[int]] = []
    stack: list[int] = []
    i, n = 0, len(text)
    expect_label = True
    while True:
        while i < n and text[i].isspace():
            i += 1
        if expect_label:
            if i >= n:
                if not labels:
                    raise TreeSyntaxError("empty input", i)
                raise TreeSyntaxError("expected a label, found end of input", i)
            j = i
            while j < n and text[j] in _TOKEN_CHARS:
                j += 1
            if j == i:
                raise TreeSyntaxError(f"expected a label, found {text[i]!r}", i)
            nid = len(labels)
            labels.append(text[i:j])
            children.append([])
            if stack:
                children[stack[-1]].append(nid)
            i = j
            while i < n and text[i].isspace():
                i += 1
            if i < n and text[i] == "(":
                stack.append(nid)
                i += 1
                continue
            expect_label = False
        else:
            if i >= n:
                if stack:
                    raise TreeSyntaxError("unbalanced '(': expected ')' or ','", i)
                break
            c = text[i]
            if c == ",":
                if not stack:
                    raise TreeSyntaxError("',' outside parentheses", i)
                i += 1
                expect_label = True
            elif c == ")":
                if not stack:
                    raise TreeSyntaxError("unbalanced ')'", i)
                stack.pop()
                i += 1
            else:
                raise TreeSyntaxError(f"unexpected character {c!r}", i)
    return LabeledTree(labels, children, validate=False)


def serialize_tree(t: LabeledTree) -> str:
    """Canonical text form: no whitespace, leaves without parentheses."""
    labels, children = t.labels, t.children
    out: list[str] = []
    work: list = [t.root]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        out.append(labels[item])
        ch = children[item]
        if ch:
            work.append(")")
            for c in reversed(ch[1:]):
                work.append(c)
                work.append(",")
            work.append(ch[0])
            work.append("(")
    return "".join(out)


def trees_equal(a: LabeledTree, b: LabeledTree) -> bool:
    """Ordered labeled equality (isomorphism respecting child order)."""
    if a.n != b.n:
        return False
    stack = [(a.root, b.root)]
    while stack:
        x, y = stack.pop()
        if a.labels[x] != b.labels[y]:
            return False
        cx, cy = a.children[x], b.children[y]
        if len(cx) != len(cy):
            return False
        stack.extend(zip(cx, cy))
    return True


def info_lower_bound(n: int, sigma: int) -> float:
    """n / log_sigma(n) with the log base clamped to at least 2; 0.0 for n < 2."""
    if n < 2:
        return 0.0
    return n * math.log(max(sigma, 2)) / math.log(n)


@dataclass(frozen=True)
class TreeStats:
    n: int
    edges: int
    sigma: int
    depth: int
    info_bound: float

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": self.edges, "sigma": self.sigma,
                "depth": self.depth, "info_bound": self.info_bound}


def tree_stats(t: LabeledTree, declared_sigma: int | None = None) -> TreeStats:
    """Node/edge counts, alphabet size, depth and the information bound.

    sigma is the number of distinct labels present unless a declared
    alphabet size overrides it (generated trees may underuse their
    alphabet on purpose).
    """
    sigma = declared_sigma if declared_sigma is not None else len(set(t.labels))
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    depth = 0
    stack = [(t.root, 0)]
    children = t.children
    while stack:
        v, d = stack.pop()
        if d > depth:
            depth = d
        for c in children[v]:
            stack.append((c, d + 1))
    return TreeStats(n=t.n, edges=t.n - 1, sigma=sigma, depth=depth,
                     info_bound=info_lower_bound(t.n, sigma))


def write_bp(path, t: LabeledTree) -> None:
    """Write a single tree as UTF-8 text with a trailing LF."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_tree(t))
        fh.write("\n")


def read_bp(path) -> LabeledTree:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tree(fh.read())
