"""Top DAG: minimal sharing of identical top-tree subtrees, plus expansion
and full decompression back to the source tree.

The DAG is stored as an indexed node list.  Entries are either
``("L", parent_label, child_label)`` for leaves or
``("I", MergeKind, left_id, right_id)`` for merges; children always carry
smaller ids than their parents, so the list is a topological order.  The
text serialization (".tdag") writes one node per line in id order and ends
with a line holding the root id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .builder import (KIND_BY_CODE, ClusterNode, MergeKind, TopTree,
                      postorder_list)
from .tree import LabeledTree, TreeStats, is_valid_label


class TopDagFormatError(ValueError):
    """Unparseable or invalid .tdag content."""


class InconsistentMergeError(ValueError):
    """Merge replay failed: the structure does not describe a tree."""


class ExpansionLimitError(RuntimeError):
    """Expansion would exceed the configured node budget."""


@dataclass
class TopDag:
    nodes: list[tuple]
    root: int

    @property
    def dag_nodes(self) -> int:
        return len(self.nodes)

    @property
    def internal_count(self) -> int:
        return sum(1 for e in self.nodes if e[0] == "I")

    @property
    def dag_edges(self) -> int:
        return 2 * self.internal_count


def _minimize_with_ids(tt: TopTree):
    """Shared-subtree interning; returns the DAG, a ClusterNode-identity to
    DAG-id map, and the postorder used to build both."""
    order = postorder_list(tt.root)
    intern: dict[tuple, int] = {}
    entries: list[tuple] = []
    ids: dict[int, int] = {}
    for nd in order:
        if nd.kind is None:
            sig = (None, nd.parent_label, nd.child_label)
            entry = ("L", nd.parent_label, nd.child_label)
        else:
            lid = ids[id(nd.left)]
            rid = ids[id(nd.right)]
            sig = (nd.kind, lid, rid)
            entry = ("I", nd.kind, lid, rid)
        gid = intern.get(sig)
        if gid is None:
            gid = len(entries)
            intern[sig] = gid
            entries.append(entry)
        ids[id(nd)] = gid
    return TopDag(entries, ids[id(tt.root)]), ids, order


def minimize(tt: TopTree) -> TopDag:
    """Minimal DAG of a top tree: equal subtrees map to one node.

    Sharing is decided by exact content (dict keys compare equal values on
    hash collision), so minimality is unconditional.
    """
    dag, _, _ = _minimize_with_ids(tt)
    return dag


def expand(d: TopDag, node_budget: int = 10 ** 8) -> TopTree:
    """Unfold a DAG back into an explicit top tree.

    A small DAG can denote an exponentially larger tree, so the expanded
    node count is computed first and checked against `node_budget`.
    """
    counts: list[int] = []
    for e in d.nodes:
        counts.append(1 if e[0] == "L" else 1 + counts[e[2]] + counts[e[3]])
    total = counts[d.root]
    if total > node_budget:
        raise ExpansionLimitError(
            f"expansion needs {total} nodes, budget is {node_budget}")
    nodes = d.nodes
    result: list[ClusterNode] = []
    work: list[tuple[int, int]] = [(d.root, 0)]
    while work:
        nid, phase = work.pop()
        e = nodes[nid]
        if e[0] == "L":
            result.append(ClusterNode.leaf(e[1], e[2]))
        elif phase == 0:
            work.append((nid, 1))
            work.append((e[3], 0))
            work.append((e[2], 0))
        else:
            right = result.pop()
            left = result.pop()
            result.append(ClusterNode.merged(e[1], left, right))
    root = result.pop()
    return TopTree(root=root, n_edges=root.size)


class _FragNode:
    __slots__ = ("label", "children")

    def __init__(self, label: str):
        self.label = label
        self.children: list[_FragNode] = []


def decompress(tt: TopTree) -> LabeledTree:
    """Rebuild the source tree by replaying merges bottom-up.

    Each cluster expands to a fragment with a top node and, where defined,
    a bottom node; the merge kind alone decides how fragments glue, labels
    are payload.  Raises InconsistentMergeError on corrupt structures,
    e.g. when boundary labels fail to align.
    """
    frags: list[tuple[_FragNode, _FragNode | None]] = []
    for nd in postorder_list(tt.root):
        kind = nd.kind
        if kind is None:
            top = _FragNode(nd.parent_label)
            bottom = _FragNode(nd.child_label)
            top.children.append(bottom)
            frags.append((top, bottom))
            continue
        rtop, rbot = frags.pop()
        ltop, lbot = frags.pop()
        if kind is MergeKind.VERT_BOTTOM or kind is MergeKind.VERT:
            if lbot is None:
                raise InconsistentMergeError(
                    "vertical merge: upper cluster has no bottom boundary")
            if lbot.children:
                raise InconsistentMergeError(
                    "vertical merge: bottom boundary already has children")
            if lbot.label != rtop.label:
                raise InconsistentMergeError(
                    "inconsistent merge structure: boundary labels fail to align")
            lbot.children = rtop.children
            bottom = rbot if kind is MergeKind.VERT_BOTTOM else None
            if kind is MergeKind.VERT_BOTTOM and bottom is None:
                raise InconsistentMergeError(
                    "vertical merge: lower cluster lacks the promised bottom")
            frags.append((ltop, bottom))
        else:
            if ltop.label != rtop.label:
                raise InconsistentMergeError(
                    "inconsistent merge structure: boundary labels fail to align")
            ltop.children.extend(rtop.children)
            if kind is MergeKind.HORIZ_LEFT:
                bottom = lbot
            elif kind is MergeKind.HORIZ_RIGHT:
                bottom = rbot
            else:
                bottom = None
            if bottom is None and kind is not MergeKind.HORIZ:
                raise InconsistentMergeError(
                    "horizontal merge: operand lacks the promised bottom")
            frags.append((ltop, bottom))
    root_frag = frags.pop()[0]
    labels: list[str] = []
    children: list[list[int]] = []
    stack = [(root_frag, -1)]
    while stack:
        frag, par = stack.pop()
        nid = len(labels)
        labels.append(frag.label)
        children.append([])
        if par >= 0:
            children[par].append(nid)
        for c in reversed(frag.children):
            stack.append((c, nid))
    return LabeledTree(labels, children, validate=False)


def toptrees_identical(a: TopTree, b: TopTree) -> bool:
    """Structural equality of top trees (kinds and leaf label pairs)."""
    if a.n_edges != b.n_edges:
        return False
    stack = [(a.root, b.root)]
    while stack:
        x, y = stack.pop()
        if x.kind is not y.kind:
            return False
        if x.kind is None:
            if x.parent_label != y.parent_label or x.child_label != y.child_label:
                return False
        else:
            stack.append((x.left, y.left))
            stack.append((x.right, y.right))
    return True


def count_distinct_clusters(tt: TopTree) -> int:
    """Number of distinct subtrees of a top tree.

    Independent cross-check for minimize: collects an explicit canonical
    form (nested tuples) per subtree into a set and counts, instead of
    interning ids bottom-up.
    """
    forms: dict[int, tuple] = {}
    seen: set[tuple] = set()
    for nd in postorder_list(tt.root):
        if nd.kind is None:
            f = ("L", nd.parent_label, nd.child_label)
        else:
            f = (nd.kind.value, forms[id(nd.left)], forms[id(nd.right)])
        forms[id(nd)] = f
        seen.add(f)
    return len(seen)


@dataclass(frozen=True)
class DagStats:
    dag_nodes: int
    dag_edges: int
    toptree_nodes: int
    ratio_info: float
    ratio_hsr: float

    def to_json_dict(self) -> dict:
        return {"dag_nodes": self.dag_nodes, "dag_edges": self.dag_edges,
                "toptree_nodes": self.toptree_nodes,
                "ratio_info": self.ratio_info, "ratio_hsr": self.ratio_hsr}


def dag_stats(d: TopDag, source: TreeStats) -> DagStats:
    """Size accounting against the two asymptotic yardsticks.

    ratio_info divides the DAG size by n/log_sigma(n); ratio_hsr divides by
    (n/log_sigma(n)) * log2(log_sigma(n)) and is NaN when the inner log is
    too small for the product to be positive.  Logs clamp sigma to >= 2.
    """
    info = source.info_bound
    ratio_info = d.dag_nodes / info if info > 0 else float("nan")
    sig = max(source.sigma, 2)
    loglog = math.log2(math.log(source.n) / math.log(sig)) if source.n >= 2 else 0.0
    if info > 0 and loglog > 0:
        ratio_hsr = d.dag_nodes / (info * loglog)
    else:
        ratio_hsr = float("nan")
    return DagStats(dag_nodes=d.dag_nodes, dag_edges=d.dag_edges,
                    toptree_nodes=2 * source.edges - 1,
                    ratio_info=ratio_info, ratio_hsr=ratio_hsr)


def dumps_tdag(d: TopDag) -> str:
    lines = []
    for e in d.nodes:
        if e[0] == "L":
            lines.append(f"L {e[1]} {e[2]}")
        else:
            lines.append(f"I {e[1].value} {e[2]} {e[3]}")
    lines.append(str(d.root))
    return "\n".join(lines) + "\n"


def loads_tdag(text: str) -> TopDag:
    """Parse and validate .tdag text.

    Enforces the format invariants: ids reference earlier lines only, no
    two entries are identical, and every node is reachable from the root.
    """
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if len(lines) < 2:
        raise TopDagFormatError("a .tdag needs at least one node and a root line")
    entries: list[tuple] = []
    seen: set[tuple] = set()
    for idx, ln in enumerate(lines[:-1]):
        parts = ln.split()
        if parts[0] == "L" and len(parts) == 3:
            if not (is_valid_label(parts[1]) and is_valid_label(parts[2])):
                raise TopDagFormatError(f"line {idx}: invalid label token")
            entry = ("L", parts[1], parts[2])
        elif parts[0] == "I" and len(parts) == 4:
            kind = KIND_BY_CODE.get(parts[1])
            if kind is None:
                raise TopDagFormatError(f"line {idx}: unknown merge kind {parts[1]!r}")
            try:
                left, right = int(parts[2]), int(parts[3])
            except ValueError:
                raise TopDagFormatError(f"line {idx}: non-integer child id") from None
            if not (0 <= left < idx and 0 <= right < idx):
                raise TopDagFormatError(
                    f"line {idx}: child ids must reference earlier lines")
            entry = ("I", kind, left, right)
        else:
            raise TopDagFormatError(f"line {idx}: unrecognized node line {ln!r}")
        if entry in seen:
            raise TopDagFormatError(f"line {idx}: duplicate entry breaks minimality")
        seen.add(entry)
        entries.append(entry)
    try:
        root = int(lines[-1])
    except ValueError:
        raise TopDagFormatError("last line must be the root id") from None
    if not 0 <= root < len(entries):
        raise TopDagFormatError(f"root id {root} out of range")
    reachable = [False] * len(entries)
    stack = [root]
    reachable[root] = True
    while stack:
        e = entries[stack.pop()]
        if e[0] == "I":
            for c in (e[2], e[3]):
                if not reachable[c]:
                    reachable[c] = True
                    stack.append(c)
    if not all(reachable):
        raise TopDagFormatError("unreachable nodes present")
    return TopDag(entries, root)


def write_tdag(path, d: TopDag) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_tdag(d))


def read_tdag(path) -> TopDag:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_tdag(fh.read())
