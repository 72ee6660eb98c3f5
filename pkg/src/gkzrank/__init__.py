"""Combinatorial rank jumps of A-hypergeometric systems with weakly toric modules."""
from .cone import ConeFace, FaceLattice, enumerate_faces, face_volume, normalized_volume, support_function
from .errors import (
    GKZError,
    InvalidBoundFunctional,
    InvariantViolation,
    NotAFacet,
    NotASublattice,
    NotFullLattice,
    NotPointed,
    RecursionDepthExceeded,
)
from .isom import complement_count, e_tau, isom_signature, systems_isomorphic
from .rankjump import (
    build_page,
    first_page_rank,
    image_rank,
    partial_characteristic,
    rank_jump,
    simple_jump_closed_form,
    two_component_closed_form,
)
from .ranking import RankingPair, max_pairs, ranking_lattices, same_ranking_slab
from .semigroup import MonoidModule, mod_face_membership, semigroup_membership

__all__ = [
    "ConeFace", "FaceLattice", "enumerate_faces", "face_volume", "normalized_volume",
    "support_function", "GKZError", "InvalidBoundFunctional", "InvariantViolation", "NotAFacet",
    "NotASublattice", "NotFullLattice", "NotPointed", "RecursionDepthExceeded",
    "complement_count", "e_tau", "isom_signature", "systems_isomorphic", "build_page",
    "first_page_rank", "image_rank", "partial_characteristic", "rank_jump",
    "simple_jump_closed_form", "two_component_closed_form", "RankingPair", "max_pairs",
    "ranking_lattices", "same_ranking_slab", "MonoidModule", "mod_face_membership",
    "semigroup_membership",
]
