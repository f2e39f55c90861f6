"""Deterministic tree generators: the adversarial gadget family and random trees.

The family is built from three pieces, all over a canonical alphabet:

* ``P_k`` -- a path of 8**k nodes whose labels spell a chosen word,
* ``S_k`` -- a full ternary tree of height k with a uniform label,
* ``G_k`` -- a root holding 2**k - 1 copies of S_k followed by one P_k,
* ``T_k`` -- a common root holding m gadgets, the i-th gadget's path
  labeled by the i-th lexicographic word of length 8**k.

The ternary trees are much smaller than the path but take the same number
of merge iterations to contract, which is what makes the family adversarial
for the uncapped construction.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field

from .tree import LabeledTree


def alphabet(sigma: int) -> list[str]:
    """Canonical sigma-symbol alphabet, lexicographically ordered by index."""
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    if sigma <= 26:
        return list(string.ascii_lowercase[:sigma])
    width = len(str(sigma - 1))
    return [f"s{i:0{width}d}" for i in range(sigma)]


def _word_capacity_at_least(sigma: int, t: int, m: int) -> bool:
    """True iff sigma**t >= m, without materializing huge powers."""
    cap = 1
    for _ in range(t):
        cap *= sigma
        if cap >= m:
            return True
    return cap >= m


def kth_word(i: int, t: int, sigma: int) -> list[str]:
    """The i-th word of length t over the canonical alphabet, in lexicographic
    order; equivalently the base-sigma digits of i, most significant first.

    Bounds are checked with exact integer arithmetic, so huge sigma**t is fine.
    """
    if t < 1:
        raise ValueError("word length must be at least 1")
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    if i < 0 or not _word_capacity_at_least(sigma, t, i + 1):
        raise ValueError(f"word index {i} out of range for sigma={sigma}, t={t}")
    syms = alphabet(sigma)
    digits = []
    x = i
    for _ in range(t):
        x, r = divmod(x, sigma)
        digits.append(syms[r])
    digits.reverse()
    return digits


@dataclass
class FamilyParams:
    """Parameters of the gadget family; t = 8**k is the path length in nodes."""

    k: int
    sigma: int
    m: int
    seed: int = 0
    t: int = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.sigma < 2:
            raise ValueError("sigma must be at least 2")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        self.t = 8 ** self.k
        if not _word_capacity_at_least(self.sigma, self.t, self.m):
            raise ValueError(
                f"m={self.m} exceeds the {self.sigma}**{self.t} distinct words available")


def gen_path(word: list[str]) -> LabeledTree:
    """Path with one node per word symbol, root labeled word[0]."""
    if not word:
        raise ValueError("word must be non-empty")
    t = len(word)
    children = [[i + 1] for i in range(t - 1)]
    children.append([])
    return LabeledTree(list(word), children)


def gen_full_ternary(k: int, label: str) -> LabeledTree:
    """Complete ternary tree of height k, every node carrying `label`."""
    if k < 0:
        raise ValueError("height must be non-negative")
    labels: list[str] = []
    children: list[list[int]] = []
    stack = [(k, -1)]
    while stack:
        h, par = stack.pop()
        nid = len(labels)
        labels.append(label)
        children.append([])
        if par >= 0:
            children[par].append(nid)
        if h > 0:
            for _ in range(3):
                stack.append((h - 1, nid))
    return LabeledTree(labels, children, validate=False)


def _graft(root_label: str, subtrees: list[LabeledTree]) -> LabeledTree:
    """New root whose children are the given subtrees' roots, in order."""
    labels = [root_label]
    children: list[list[int]] = [[]]
    for sub in subtrees:
        off = len(labels)
        children[0].append(off + sub.root)
        labels.extend(sub.labels)
        children.extend([c + off for c in ch] for ch in sub.children)
    return LabeledTree(labels, children, validate=False)


def gen_gadget(k: int, path_word: list[str], tree_label: str,
               root_label: str) -> LabeledTree:
    """Gadget: root with 2**k - 1 ternary trees of height k, then one path.

    The path word must have length exactly 8**k; the path is the last child
    so that its node ids are the final 8**k ids of the gadget block.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    t = 8 ** k
    if len(path_word) != t:
        raise ValueError(f"path word must have length {t}, got {len(path_word)}")
    ternary = gen_full_ternary(k, tree_label)
    parts = [ternary] * (2 ** k - 1)
    parts.append(gen_path(path_word))
    return _graft(root_label, parts)


def gadget_size(k: int) -> int:
    """Node count of a gadget: 1 + (2**k - 1) * |S_k| + 8**k."""
    s = (3 ** (k + 1) - 1) // 2
    return 1 + (2 ** k - 1) * s + 8 ** k


def gen_family_tree(p: FamilyParams) -> LabeledTree:
    """Common root over m gadgets; gadget i's path spells the i-th word."""
    tree, _ = gen_family_tree_with_paths(p)
    return tree


def gen_family_tree_with_paths(p: FamilyParams) -> tuple[LabeledTree, list[list[int]]]:
    """As gen_family_tree, plus the node ids of each gadget's path.

    The id lists are root-to-bottom per gadget, useful for tagging which
    clusters of a compressed tree cover path edges.
    """
    first = alphabet(p.sigma)[0]
    gadgets = [gen_gadget(p.k, kth_word(i, p.t, p.sigma), first, first)
               for i in range(p.m)]
    tree = _graft(first, gadgets)
    gsize = gadget_size(p.k)
    paths = []
    for i in range(p.m):
        path_start = 1 + i * gsize + (gsize - p.t)
        paths.append(list(range(path_start, path_start + p.t)))
    return tree, paths


def gen_random_tree(n: int, sigma: int, seed: int) -> LabeledTree:
    """Random tree by uniform parent attachment; deterministic per seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    syms = alphabet(sigma)
    rng = random.Random(seed)
    labels = [syms[rng.randrange(sigma)] for _ in range(n)]
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        children[rng.randrange(v)].append(v)
    return LabeledTree(labels, children, validate=False)
