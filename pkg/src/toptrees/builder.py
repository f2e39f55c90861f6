"""Top tree construction by iterated horizontal and vertical cluster merges.

A cluster is a connected edge set of the source tree with a top boundary
node and at most one bottom boundary node.  Construction contracts an
auxiliary tree whose edges are the current clusters: each iteration first
merges sibling edge pairs under common parents (horizontal), then merges
consecutive edge pairs along single-child paths (vertical).  An edge
created by a horizontal merge never takes part in a vertical merge within
the same iteration.

Two modes are supported:

* ``original`` -- every candidate merge is applied;
* ``modified`` -- candidates are generated exactly as in the original
  mode, but in iteration t only those whose operands both have size at
  most alpha**t are applied.  Sizes are covered-edge counts and the
  threshold test is exact rational arithmetic, so no merge ever slips
  through on float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .tree import LabeledTree


class NoEdgesError(ValueError):
    """Single-node input: no edges means there is no top tree to build."""


class IterationLimitError(RuntimeError):
    """Safety cap tripped; indicates a builder bug, never expected."""


class MergeError(ValueError):
    """Operands do not form a valid cluster merge."""


class MergeKind(Enum):
    """The five ways two clusters sharing one boundary node can merge.

    Vertical merges glue the lower cluster's top to the upper cluster's
    bottom; horizontal merges glue two sibling child ranges at their
    common top.  The variant records where the merged cluster's bottom
    boundary (if any) comes from, which is exactly what decompression
    needs to replay the merge.
    """

    VERT_BOTTOM = "VB"   # vertical, lower cluster keeps its bottom boundary
    VERT = "VN"          # vertical, no bottom boundary in the result
    HORIZ_LEFT = "HL"    # horizontal, left operand carries the bottom
    HORIZ_RIGHT = "HR"   # horizontal, right operand carries the bottom
    HORIZ = "HN"         # horizontal, no bottom boundary


KIND_BY_CODE = {k.value: k for k in MergeKind}


class ClusterNode:
    """Node of a top tree: a leaf covers one source edge, an internal node
    records the merge of its two children.

    `size` counts covered source edges.  `top`/`bottom` are source-node ids
    kept during construction (None on expanded trees); `edge_child` is the
    child endpoint of a leaf's source edge, kept for instrumentation.
    None of the metadata takes part in structural identity.
    """

    __slots__ = ("kind", "left", "right", "parent_label", "child_label",
                 "size", "top", "bottom", "edge_child")

    def __init__(self, kind, left, right, parent_label, child_label,
                 size, top, bottom, edge_child):
        self.kind = kind
        self.left = left
        self.right = right
        self.parent_label = parent_label
        self.child_label = child_label
        self.size = size
        self.top = top
        self.bottom = bottom
        self.edge_child = edge_child

    @classmethod
    def leaf(cls, parent_label, child_label, top=None, bottom=None,
             edge_child=None):
        return cls(None, None, None, parent_label, child_label, 1,
                   top, bottom, edge_child)

    @classmethod
    def merged(cls, kind, left, right, top=None, bottom=None):
        return cls(kind, left, right, None, None, left.size + right.size,
                   top, bottom, None)

    @property
    def is_leaf(self) -> bool:
        return self.kind is None

    def __repr__(self) -> str:
        if self.kind is None:
            return f"Leaf({self.parent_label},{self.child_label})"
        return f"Cluster({self.kind.value},size={self.size})"


@dataclass
class TopTree:
    """Binary merge hierarchy; leaves correspond one-to-one to source edges."""

    root: ClusterNode
    n_edges: int


@dataclass
class BuildConfig:
    algo: str = "original"
    alpha: Fraction = Fraction(10, 9)
    max_iterations: int | None = None
    audit: bool = False

    def __post_init__(self):
        if self.algo not in ("original", "modified"):
            raise ValueError(f"unknown algorithm {self.algo!r}")
        if not isinstance(self.alpha, Fraction):
            self.alpha = Fraction(self.alpha)
        if self.alpha <= 1:
            raise ValueError("alpha must be greater than 1")


@dataclass
class IterationTrace:
    """Record of one iteration: m clusters at the start, p of them within
    the size threshold and q above it, plus what was merged."""

    t: int
    m: int
    p: int
    q: int
    candidates: int
    applied: int
    clusters_after: int
    applied_sizes: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def to_json_dict(self) -> dict:
        return {"t": self.t, "m": self.m, "p": self.p, "q": self.q,
                "applied": self.applied, "clusters_after": self.clusters_after}


def merge_clusters(a: ClusterNode, b: ClusterNode, relation: str) -> ClusterNode:
    """Merge two clusters sharing exactly one boundary node.

    For "vertical", a is the upper cluster and b the lower; for
    "horizontal", a is the left sibling range and b the right.  Raises
    MergeError when the boundary configuration is not a valid cluster,
    which would signal a builder bug.
    """
    if relation == "vertical":
        if a.bottom is None:
            raise MergeError("upper cluster of a vertical merge has no bottom boundary")
        if a.bottom != b.top:
            raise MergeError("vertical merge operands share no boundary node")
        kind = MergeKind.VERT_BOTTOM if b.bottom is not None else MergeKind.VERT
        return ClusterNode.merged(kind, a, b, top=a.top, bottom=b.bottom)
    if relation == "horizontal":
        if a.top is None or a.top != b.top:
            raise MergeError("horizontal merge operands share no top boundary node")
        if a.bottom is not None and b.bottom is not None:
            raise MergeError("merge would produce two bottom boundary nodes")
        if a.bottom is not None:
            kind, bottom = MergeKind.HORIZ_LEFT, a.bottom
        elif b.bottom is not None:
            kind, bottom = MergeKind.HORIZ_RIGHT, b.bottom
        else:
            kind, bottom = MergeKind.HORIZ, None
        return ClusterNode.merged(kind, a, b, top=a.top, bottom=bottom)
    raise ValueError(f"unknown merge relation {relation!r}")


class AuxNode:
    """Node of the auxiliary contracted tree; `cluster` is the cluster of
    the edge to its parent (None at the root)."""

    __slots__ = ("tid", "parent", "children", "cluster")

    def __init__(self, tid: int):
        self.tid = tid
        self.parent: AuxNode | None = None
        self.children: list[AuxNode] = []
        self.cluster: ClusterNode | None = None


class AuxState:
    """Auxiliary tree whose edges are the current clusters.

    A node is a leaf here iff it was a leaf of the source tree; merges only
    ever remove nodes, so leaf status never changes.
    """

    def __init__(self, tree: LabeledTree):
        if tree.n < 2:
            raise NoEdgesError("a single-node tree has no edges, hence no top tree")
        labels, children = tree.labels, tree.children
        nodes = [AuxNode(i) for i in range(tree.n)]
        for v, ch in enumerate(children):
            nd = nodes[v]
            nd.children = [nodes[c] for c in ch]
            for c in ch:
                cn = nodes[c]
                cn.parent = nd
                cn.cluster = ClusterNode.leaf(
                    labels[v], labels[c], top=v,
                    bottom=c if children[c] else None, edge_child=c)
        self.root = nodes[tree.root]
        self.n_edges = tree.n - 1

    def live_nodes(self) -> list[AuxNode]:
        out = [self.root]
        stack = [self.root]
        while stack:
            for c in stack.pop().children:
                out.append(c)
                stack.append(c)
        return out

    def clusters(self) -> list[ClusterNode]:
        return [nd.cluster for nd in self.live_nodes() if nd.cluster is not None]

    def cluster_count(self) -> int:
        return len(self.live_nodes()) - 1


class HorizontalPair(NamedTuple):
    parent: AuxNode
    left: AuxNode
    right: AuxNode


class VerticalPair(NamedTuple):
    bottom: AuxNode
    middle: AuxNode
    top: AuxNode


def horizontal_candidates(state: AuxState) -> list[HorizontalPair]:
    """Sibling edge pairs to merge under each node with >= 2 children.

    Children v1..vk pair up as (v1,v2), (v3,v4), ... when at least one of
    the pair is a leaf; for odd k with vk a leaf below two non-leaves, the
    extra pair (v_{k-1}, vk) is added instead.
    """
    pairs = []
    for v in state.live_nodes():
        ch = v.children
        k = len(ch)
        if k < 2:
            continue
        for i in range(0, k - 1, 2):
            a, b = ch[i], ch[i + 1]
            if not a.children or not b.children:
                pairs.append(HorizontalPair(v, a, b))
        if k & 1 and not ch[-1].children and ch[-3].children and ch[-2].children:
            pairs.append(HorizontalPair(v, ch[-2], ch[-1]))
    return pairs


def vertical_candidates(state: AuxState, ineligible=frozenset()) -> list[VerticalPair]:
    """Consecutive edge pairs along maximal single-child paths, bottom-up.

    `ineligible` holds the child endpoints of edges that must not take part
    (the results of this iteration's horizontal merges).  Any pair touching
    such an edge is dropped, which also covers the rule that on an
    odd-length path the topmost pair forms only when the top edge was not
    just produced by a horizontal merge.
    """
    pairs = []
    for u in state.live_nodes():
        if u.parent is None or len(u.children) == 1:
            continue  # not the bottom of a maximal path
        path = [u]
        cur = u.parent
        path.append(cur)
        while cur.parent is not None and len(cur.children) == 1:
            cur = cur.parent
            path.append(cur)
        p = len(path)
        # edge j (1-based, from the bottom) has child endpoint path[j-1]
        for j in range(1, p - 1, 2):
            lo, mid = path[j - 1], path[j]
            if lo not in ineligible and mid not in ineligible:
                pairs.append(VerticalPair(lo, mid, path[j + 1]))
    return pairs


def _simulate_candidates(state: AuxState) -> tuple[list[HorizontalPair], list[VerticalPair]]:
    """Candidates of one original-mode iteration; the state is left unchanged.

    Horizontal merges are applied provisionally so that vertical candidates
    see the contracted structure, then rolled back.
    """
    hpairs = horizontal_candidates(state)
    saved: dict[int, tuple[AuxNode, list[AuxNode]]] = {}
    survivors = set()
    losers_by_parent: dict[int, tuple[AuxNode, set[int]]] = {}
    for pr in hpairs:
        v, a, b = pr
        if id(v) not in saved:
            saved[id(v)] = (v, list(v.children))
        surv = a if a.children else (b if b.children else a)
        loser = b if surv is a else a
        survivors.add(surv)
        ent = losers_by_parent.get(id(v))
        if ent is None:
            ent = losers_by_parent[id(v)] = (v, set())
        ent[1].add(id(loser))
    for v, losers in losers_by_parent.values():
        v.children = [c for c in v.children if id(c) not in losers]
    vpairs = vertical_candidates(state, survivors)
    for v, ch in saved.values():
        v.children = ch
    return hpairs, vpairs


def _apply_merges(state: AuxState, h_apply: list[HorizontalPair],
                  v_apply: list[VerticalPair],
                  applied_sizes: list[tuple[int, int]]) -> None:
    # candidate pairs are edge-disjoint, so application order is irrelevant
    losers_by_parent: dict[int, tuple[AuxNode, set[int]]] = {}
    for v, a, b in h_apply:
        applied_sizes.append((a.cluster.size, b.cluster.size))
        merged = merge_clusters(a.cluster, b.cluster, "horizontal")
        surv = a if a.children else (b if b.children else a)
        loser = b if surv is a else a
        surv.cluster = merged
        ent = losers_by_parent.get(id(v))
        if ent is None:
            ent = losers_by_parent[id(v)] = (v, set())
        ent[1].add(id(loser))
        loser.parent = None
    for v, losers in losers_by_parent.values():
        v.children = [c for c in v.children if id(c) not in losers]
    for lo, mid, top in v_apply:
        applied_sizes.append((mid.cluster.size, lo.cluster.size))
        merged = merge_clusters(mid.cluster, lo.cluster, "vertical")
        top.children[top.children.index(mid)] = lo
        lo.parent = top
        mid.parent = None
        lo.cluster = merged


def _audit_partition(state: AuxState, n_edges: int, expected_count: int) -> None:
    clusters = state.clusters()
    if len(clusters) != expected_count:
        raise AssertionError("cluster count out of sync with auxiliary tree")
    if sum(c.size for c in clusters) != n_edges:
        raise AssertionError("cluster sizes no longer partition the edge set")


def apply_iteration(state: AuxState, t: int, cfg: BuildConfig) -> IterationTrace:
    """Run iteration t on the state in place and return its trace entry.

    In modified mode the candidate set is generated exactly as the original
    procedure would, then filtered by the size cap before anything is
    committed, so a vertical candidate never depends on a horizontal merge
    that the filter discarded.
    """
    m = state.cluster_count()
    hpairs, vpairs = _simulate_candidates(state)
    cutoff = (cfg.alpha.numerator ** t) // (cfg.alpha.denominator ** t)
    sizes = [c.size for c in state.clusters()]
    p = sum(1 for s in sizes if s <= cutoff)
    trace = _finish_iteration(state, t, cfg, m, p, hpairs, vpairs, cutoff)
    return trace


def _finish_iteration(state, t, cfg, m, p, hpairs, vpairs, cutoff) -> IterationTrace:
    if cfg.algo == "modified":
        h_apply = [pr for pr in hpairs
                   if pr.left.cluster.size <= cutoff and pr.right.cluster.size <= cutoff]
        v_apply = [pr for pr in vpairs
                   if pr.bottom.cluster.size <= cutoff and pr.middle.cluster.size <= cutoff]
    else:
        h_apply, v_apply = hpairs, vpairs
    applied_sizes: list[tuple[int, int]] = []
    if h_apply or v_apply:
        _apply_merges(state, h_apply, v_apply, applied_sizes)
    after = m - len(applied_sizes)
    if cfg.audit:
        _audit_partition(state, state.n_edges, after)
    return IterationTrace(t=t, m=m, p=p, q=m - p,
                          candidates=len(hpairs) + len(vpairs),
                          applied=len(applied_sizes), clusters_after=after,
                          applied_sizes=applied_sizes)


def build_top_tree(tree: LabeledTree,
                   cfg: BuildConfig | None = None) -> tuple[TopTree, list[IterationTrace]]:
    """Construct the top tree of `tree`, iterating until one cluster remains.

    Returns the top tree together with one trace entry per iteration.
    Raises NoEdgesError on single-node input and IterationLimitError if the
    safety cap (default 64 * ceil(log2 n)) is exceeded, which would mean a
    bug rather than a legitimate outcome.
    """
    if cfg is None:
        cfg = BuildConfig()
    if tree.n < 2:
        raise NoEdgesError("a single-node tree has no edges, hence no top tree")
    state = AuxState(tree)
    modified = cfg.algo == "modified"
    num, den = cfg.alpha.numerator, cfg.alpha.denominator
    num_t = den_t = 1
    limit = cfg.max_iterations
    if limit is None:
        limit = 64 * max(1, math.ceil(math.log2(tree.n)))
    count = tree.n - 1
    traces: list[IterationTrace] = []
    cached = None
    t = 0
    while count > 1:
        t += 1
        if t > limit:
            raise IterationLimitError(f"no single cluster after {limit} iterations")
        num_t *= num
        den_t *= den
        cutoff = num_t // den_t
        if cached is None:
            hpairs, vpairs = _simulate_candidates(state)
            sizes = [c.size for c in state.clusters()]
            cached = (hpairs, vpairs, sizes)
        else:
            # nothing was applied last iteration, so the state and thus the
            # candidate set are unchanged; only the threshold moved
            hpairs, vpairs, sizes = cached
        p = sum(1 for s in sizes if s <= cutoff)
        trace = _finish_iteration(state, t, cfg, count, p, hpairs, vpairs, cutoff)
        traces.append(trace)
        if trace.applied:
            count = trace.clusters_after
            cached = None
        if not modified and trace.applied == 0:
            raise IterationLimitError("original mode made no progress; builder bug")
    root = state.root
    assert len(root.children) == 1
    return TopTree(root=root.children[0].cluster, n_edges=tree.n - 1), traces


def postorder_list(root: ClusterNode) -> list[ClusterNode]:
    """Children-first node list of a top tree; iterative, left subtree first."""
    out = []
    stack = [root]
    while stack:
        nd = stack.pop()
        out.append(nd)
        if nd.kind is not None:
            stack.append(nd.left)
            stack.append(nd.right)
    out.reverse()
    return out


def toptree_height(tt: TopTree) -> int:
    height = 0
    stack = [(tt.root, 0)]
    while stack:
        nd, d = stack.pop()
        if nd.kind is None:
            if d > height:
                height = d
        else:
            stack.append((nd.left, d + 1))
            stack.append((nd.right, d + 1))
    return height


def toptree_node_count(tt: TopTree) -> int:
    return len(postorder_list(tt.root))
