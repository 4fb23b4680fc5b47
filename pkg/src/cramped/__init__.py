"""Exact and numerical tools for cramped subalgebra inclusions."""

from .branching import (
    CATALOG_PAIRS,
    EmbeddingSpec,
    b_of_lambda,
    branch,
    catalog_embedding,
    dump_embedding,
    embedding_from_descriptor,
    in_d_prime_n,
    invariant_dim,
    load_embedding,
)
from .crampedness import certify, dimension_obstruction, find_mi
from .liecore import (
    Character,
    RootSystem,
    Weight,
    build_root_system,
    dim_bounded_weights,
    distance,
    dominance_reduce,
    eta_n,
    parse_root_system,
    weight_multiplicities,
    weyl_dim,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_PAIRS",
    "Character",
    "EmbeddingSpec",
    "RootSystem",
    "Weight",
    "b_of_lambda",
    "branch",
    "build_root_system",
    "catalog_embedding",
    "certify",
    "dim_bounded_weights",
    "dimension_obstruction",
    "distance",
    "dominance_reduce",
    "dump_embedding",
    "embedding_from_descriptor",
    "eta_n",
    "find_mi",
    "in_d_prime_n",
    "invariant_dim",
    "load_embedding",
    "parse_root_system",
    "weight_multiplicities",
    "weyl_dim",
]
