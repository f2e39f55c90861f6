"""Top-tree compression toolkit.

Builds top trees of ordered labeled trees by iterated cluster merging
(original and size-capped variants), shares identical subtrees into a
minimal top DAG, decompresses back, generates an adversarial gadget family
that separates the two variants, and ships a benchmarking CLI.
"""

from .builder import (AuxState, BuildConfig, ClusterNode, IterationLimitError,
                      IterationTrace, MergeError, MergeKind, NoEdgesError,
                      TopTree, apply_iteration, build_top_tree,
                      horizontal_candidates, merge_clusters, postorder_list,
                      toptree_height, toptree_node_count, vertical_candidates)
from .counting import bound_check, enumerate_labeled_trees
from .dag import (DagStats, ExpansionLimitError, InconsistentMergeError,
                  TopDag, TopDagFormatError, count_distinct_clusters,
                  dag_stats, decompress, dumps_tdag, expand, loads_tdag,
                  minimize, read_tdag, toptrees_identical, write_tdag)
from .generators import (FamilyParams, alphabet, gen_family_tree,
                         gen_family_tree_with_paths, gen_full_ternary,
                         gen_gadget, gen_path, gen_random_tree, kth_word)
from .instrument import distinct_clusters_covering
from .tree import (LabeledTree, TreeStats, TreeSyntaxError, info_lower_bound,
                   parse_tree, read_bp, serialize_tree, tree_stats,
                   trees_equal, write_bp)

__version__ = "0.1.0"
