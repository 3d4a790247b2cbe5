"""Chromatic symmetric functions of trees.

Exact CSFs in the power-sum basis, modular fingerprints with an
instrumented operation counter, probabilistic distinctness certificates,
and an exhaustive refinement harness that verifies the CSF separates all
free trees of a given order.
"""

from .distinguish import (
    VERDICT_INCONCLUSIVE,
    VERDICT_PROVED,
    DistinctnessCertificate,
    gen_primes,
    sample_tuple,
    show_distinct,
    trials_per_prime,
    verify_certificate,
)
from .exact import (
    SFS,
    SUBSET_ORACLE_LIMIT,
    compute_csf,
    compute_sfs,
    csf_oracle,
    truncate_csf,
    truncated_csf_oracle,
)
from .fingerprint import (
    EvalSpec,
    ResidueSeq,
    count_ops,
    eval_csf,
    eval_csf_truncated,
    eval_sfs,
    is_prime,
)
from .harness import (
    KIND_COINCIDENCE,
    KIND_GENUINE,
    KIND_UNVERIFIABLE,
    STATUS_SINGLETONS,
    STATUS_UNRESOLVED,
    AuditFinding,
    CapExceededError,
    FingerprintTable,
    RefinementReport,
    RoundSpec,
    TableFormatError,
    collision_audit,
    derive_round_spec,
    load_table,
    refine_class,
    run_verification,
    save_table,
)
from .ppoly import Partition, PPoly, term_order_key
from .rng import SplitMix64
from .trees import (
    LevelSequence,
    RootedView,
    Tree,
    TreeParseError,
    TreeStructureError,
    canonical_form,
    caterpillar_tree,
    child_subtrees,
    enumerate_free_trees,
    parse_tree,
    path_tree,
    random_tree,
    relabel,
    root_at,
    serialize_tree,
    star_tree,
    tree_from_level_sequence,
    tree_from_prufer,
)

__version__ = "0.1.0"

__all__ = [
    "AuditFinding",
    "CapExceededError",
    "DistinctnessCertificate",
    "EvalSpec",
    "FingerprintTable",
    "KIND_COINCIDENCE",
    "KIND_GENUINE",
    "KIND_UNVERIFIABLE",
    "LevelSequence",
    "Partition",
    "PPoly",
    "RefinementReport",
    "ResidueSeq",
    "RootedView",
    "RoundSpec",
    "SFS",
    "STATUS_SINGLETONS",
    "STATUS_UNRESOLVED",
    "SUBSET_ORACLE_LIMIT",
    "SplitMix64",
    "TableFormatError",
    "Tree",
    "TreeParseError",
    "TreeStructureError",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_PROVED",
    "canonical_form",
    "caterpillar_tree",
    "child_subtrees",
    "collision_audit",
    "compute_csf",
    "compute_sfs",
    "count_ops",
    "csf_oracle",
    "derive_round_spec",
    "enumerate_free_trees",
    "eval_csf",
    "eval_csf_truncated",
    "eval_sfs",
    "gen_primes",
    "is_prime",
    "load_table",
    "parse_tree",
    "path_tree",
    "random_tree",
    "refine_class",
    "relabel",
    "root_at",
    "run_verification",
    "sample_tuple",
    "save_table",
    "serialize_tree",
    "show_distinct",
    "star_tree",
    "term_order_key",
    "tree_from_level_sequence",
    "tree_from_prufer",
    "trials_per_prime",
    "truncate_csf",
    "truncated_csf_oracle",
    "verify_certificate",
]
