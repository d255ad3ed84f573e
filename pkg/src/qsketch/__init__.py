"""Simulated quantum sketching protocols for Hamming, graph and l1 distances."""

from .bits import BitString, SparseGF2Matrix, gf2_matvec, hamming_distance, weight
from .bounds import ModOracle, OracleMode, correctness_table, gt_via_mod, path_graph_instance
from .config import DEFAULT_CONFIG, ProtocolConfig
from .distance import GraphDistanceLadder, run_dis_epsilon
from .fingerprint import (
    SwapTestEstimate,
    copies_needed,
    estimate_overlap,
    fingerprint_overlap,
    qubits_per_copy,
    raw_fingerprint_vector,
    sample_swap_tests,
    swap_accept_prob,
    tail_bound,
)
from .graphs import (
    EmbeddingError,
    Graph,
    HypercubeEmbedding,
    all_pairs_distances,
    diameter,
    embed_graph,
    embed_l1,
    embed_partial_cube,
    is_bipartite,
    is_convex,
    is_l1_graph,
    is_partial_cube,
    rescale,
    semicube,
    verify_embedding,
)
from .jl import JLMap, apply_and_normalize, jl_dimension, verify_jl
from .l1 import QuantizedVector, l1_from_hamming, run_l1_epsilon, unary_encode_entry, unary_encode_vector
from .ladder import (
    CostReport,
    HammingLadder,
    ProtocolResult,
    build_schedule,
    exact_failure_probability,
    per_step_failure,
    plan_cost,
    run_ham_epsilon,
)
from .sketch import decide_threshold, decide_zero, delta_bounds, sample_sparse_matrix, size_sketch, verify_separation

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "CostReport",
    "DEFAULT_CONFIG",
    "EmbeddingError",
    "Graph",
    "GraphDistanceLadder",
    "HammingLadder",
    "HypercubeEmbedding",
    "JLMap",
    "ModOracle",
    "OracleMode",
    "ProtocolConfig",
    "ProtocolResult",
    "QuantizedVector",
    "SparseGF2Matrix",
    "SwapTestEstimate",
    "all_pairs_distances",
    "apply_and_normalize",
    "build_schedule",
    "copies_needed",
    "correctness_table",
    "decide_threshold",
    "decide_zero",
    "delta_bounds",
    "diameter",
    "embed_graph",
    "embed_l1",
    "embed_partial_cube",
    "estimate_overlap",
    "exact_failure_probability",
    "fingerprint_overlap",
    "gf2_matvec",
    "gt_via_mod",
    "hamming_distance",
    "is_bipartite",
    "is_convex",
    "is_l1_graph",
    "is_partial_cube",
    "jl_dimension",
    "l1_from_hamming",
    "path_graph_instance",
    "per_step_failure",
    "plan_cost",
    "qubits_per_copy",
    "raw_fingerprint_vector",
    "rescale",
    "run_dis_epsilon",
    "run_ham_epsilon",
    "run_l1_epsilon",
    "sample_sparse_matrix",
    "sample_swap_tests",
    "semicube",
    "size_sketch",
    "swap_accept_prob",
    "tail_bound",
    "unary_encode_entry",
    "unary_encode_vector",
    "verify_embedding",
    "verify_jl",
    "verify_separation",
    "weight",
]
