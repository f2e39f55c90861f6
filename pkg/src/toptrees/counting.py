"""Exhaustive counting of small labeled binary trees against the closed bound.

Cluster hierarchies are binary trees whose nodes carry one of sigma**2 + 5
labels (a pair of source labels on a leaf, or one of the five merge kinds on
an internal node).  A generous upper bound for the number of distinct such
trees with at most x nodes is (24 * sigma**2) ** (x + 1); this module checks
it by generating every labeled tree explicitly, feasible for x <= 3 and
sigma <= 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .builder import MergeKind

MAX_X = 3
MAX_SIGMA = 4


def label_universe(sigma: int) -> list[tuple]:
    """sigma**2 pair labels plus the five merge labels."""
    pairs = [("P", i, j) for i in range(sigma) for j in range(sigma)]
    merges = [("M", k.value) for k in MergeKind]
    return pairs + merges


@lru_cache(maxsize=None)
def binary_shapes(size: int) -> tuple:
    """All binary tree shapes with `size` nodes (children optional and
    positional), as nested (left, right) tuples; None is the empty tree."""
    if size == 0:
        return (None,)
    shapes = []
    for left_size in range(size):
        for ls in binary_shapes(left_size):
            for rs in binary_shapes(size - 1 - left_size):
                shapes.append((ls, rs))
    return tuple(shapes)


def _label_shape(shape, labels, pos=0):
    if shape is None:
        return None, pos
    left, pos = _label_shape(shape[0], labels, pos)
    right, pos = _label_shape(shape[1], labels, pos)
    return (labels[pos], left, right), pos + 1


def enumerate_labeled_trees(size: int, sigma: int) -> set:
    """Every distinct labeled binary tree with exactly `size` nodes."""
    universe = label_universe(sigma)
    out = set()
    for shape in binary_shapes(size):
        for labels in product(universe, repeat=size):
            tree, used = _label_shape(shape, labels)
            assert used == size
            out.add(tree)
    return out


@dataclass(frozen=True)
class BoundCheckRow:
    size: int
    count: int
    cumulative: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.cumulative <= self.bound


def bound_check(x: int, sigma: int) -> list[BoundCheckRow]:
    """Counts of distinct labeled trees of size <= i for each i <= x,
    against (24 * sigma**2) ** (x + 1).  Enumeration is exhaustive, so the
    parameters are capped to keep it feasible."""
    if not 1 <= x <= MAX_X:
        raise ValueError(f"x must be between 1 and {MAX_X} (enumeration feasibility)")
    if not 1 <= sigma <= MAX_SIGMA:
        raise ValueError(f"sigma must be between 1 and {MAX_SIGMA}")
    bound = (24 * sigma * sigma) ** (x + 1)
    rows = []
    cumulative = 0
    for i in range(1, x + 1):
        count = len(enumerate_labeled_trees(i, sigma))
        cumulative += count
        rows.append(BoundCheckRow(size=i, count=count, cumulative=cumulative,
                                  bound=bound))
    return rows
