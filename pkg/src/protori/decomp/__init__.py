"""Finite-rank torsion-free groups in strand presentation and the Main Decomposition."""

from .main import (
    DEFAULT_BOUND,
    Decomposition,
    NearIso,
    ProtorusDecomposition,
    ProtorusDesc,
    cd_iso,
    decompose_protorus,
    divisible_part,
    has_Q_summand,
    hom_to_z_witness,
    is_torus_free,
    main_decompose,
    near_iso,
    product,
    protorus_dim,
    split,
    uniqueness_check,
)
from .search import Idempotent, find_rank1_idempotent
from .strands import Strand, StrandGroup, direct_sum, element_heights, maps_into, member, rank

__all__ = [
    "DEFAULT_BOUND",
    "Decomposition",
    "Idempotent",
    "NearIso",
    "ProtorusDecomposition",
    "ProtorusDesc",
    "Strand",
    "StrandGroup",
    "cd_iso",
    "decompose_protorus",
    "direct_sum",
    "divisible_part",
    "element_heights",
    "find_rank1_idempotent",
    "has_Q_summand",
    "hom_to_z_witness",
    "is_torus_free",
    "main_decompose",
    "maps_into",
    "member",
    "near_iso",
    "product",
    "protorus_dim",
    "rank",
    "split",
    "uniqueness_check",
]
