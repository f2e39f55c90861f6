"""Shared helpers and small corpora for the test suite."""

from __future__ import annotations

import pytest

from toptrees import (LabeledTree, gen_family_tree, gen_full_ternary,
                      gen_path, gen_random_tree, kth_word, parse_tree,
                      postorder_list, FamilyParams)


def ceil_ratio_log(num: int, den: int, n: int) -> int:
    """Smallest i >= 0 with (num/den)**i >= n; exact integer arithmetic."""
    i, hi, lo = 0, 1, 1
    while hi < n * lo:
        hi *= num
        lo *= den
        i += 1
    return i


def covered_edges(cluster) -> frozenset:
    """Edge ids (child endpoints) covered by a cluster."""
    return frozenset(nd.edge_child for nd in postorder_list(cluster)
                     if nd.kind is None)


def subtree_edge_sets(tree: LabeledTree) -> list[set[int]]:
    """For each node c, the edge ids inside T(c) plus the edge into c."""
    n = tree.n
    sets: list[set[int] | None] = [None] * n
    order = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(tree.children[v])
    for v in reversed(order):
        s = {v}
        for c in tree.children[v]:
            s |= sets[c]
        sets[v] = s
    return sets


def all_valid_cluster_edge_sets(tree: LabeledTree) -> set[frozenset]:
    """Brute-force enumeration of every edge set a cluster may cover:
    a contiguous child range under some node, minus (optionally) everything
    strictly below one inner node."""
    sub = subtree_edge_sets(tree)
    below = [set().union(*(sub[c] for c in tree.children[u])) if tree.children[u]
             else set() for u in range(tree.n)]
    valid: set[frozenset] = set()
    for v in range(tree.n):
        ch = tree.children[v]
        for s in range(len(ch)):
            base: set[int] = set()
            for r in range(s, len(ch)):
                base |= sub[ch[r]]
                frozen = frozenset(base)
                valid.add(frozen)
                for u in frozen:  # every covered node except v is an edge child
                    valid.add(frozenset(base - below[u]))
    return valid


@pytest.fixture(scope="session")
def small_trees() -> list[LabeledTree]:
    trees = [
        parse_tree("a(b)"),
        parse_tree("a(b,c)"),
        parse_tree("a(b(c(d)))"),
        parse_tree("a(a,a)"),
        parse_tree("r(x(p,q),y,z(w))"),
        gen_path(kth_word(0, 8, 2)),
        gen_path(kth_word(5, 8, 2)),
        gen_full_ternary(2, "a"),
        gen_family_tree(FamilyParams(k=1, sigma=2, m=2)),
    ]
    trees += [gen_random_tree(2 + 7 * i, 1 + i % 4, seed=50 + i) for i in range(8)]
    return trees
