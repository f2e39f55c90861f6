"""Cluster tagging: which distinct clusters cover designated source edges.

Used to count, per generated gadget, how many distinct top-DAG nodes contain
at least one edge of that gadget's path.  Edges are identified by the id of
their child endpoint, the same convention the builder stores on leaf
clusters.
"""

from __future__ import annotations

from .builder import TopTree
from .dag import _minimize_with_ids


def distinct_clusters_covering(tt: TopTree,
                               edge_sets: list[set[int]]) -> tuple[int, list[int]]:
    """Count distinct DAG nodes whose cluster covers an edge from any set.

    Returns (total, per_set) where total counts DAG nodes covering at least
    one tagged edge and per_set[i] counts those covering an edge of set i.
    A DAG node is tagged if any top-tree occurrence of it covers the edge.
    """
    dag, ids, order = _minimize_with_ids(tt)
    bit_of_edge: dict[int, int] = {}
    for i, edges in enumerate(edge_sets):
        bit = 1 << i
        for e in edges:
            bit_of_edge[e] = bit_of_edge.get(e, 0) | bit
    masks: dict[int, int] = {}
    dag_masks = [0] * dag.dag_nodes
    for nd in order:
        if nd.kind is None:
            msk = bit_of_edge.get(nd.edge_child, 0)
        else:
            msk = masks[id(nd.left)] | masks[id(nd.right)]
        masks[id(nd)] = msk
        dag_masks[ids[id(nd)]] |= msk
    total = sum(1 for m in dag_masks if m)
    per_set = [sum(1 for m in dag_masks if (m >> i) & 1)
               for i in range(len(edge_sets))]
    return total, per_set
