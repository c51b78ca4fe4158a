"""Finite and profinite separation systems: orientations, splitting stars,
inverse limits, closure and property checks."""
from .core import (
    CycleError,
    Impossible,
    LemmaViolation,
    SepSysError,
    SeparationSystem,
    classify,
    consistent_orientations,
    essential_core,
    extend_orientation,
    is_consistent,
    is_nested,
    is_star,
    sigma_minus,
    splits_at,
    splitting_subsets,
    validate_system,
)
from .inverse import InverseSystem, Limit, chain_system, closure, is_closed, limit, make_inverse_system, make_poset

__all__ = [
    "CycleError",
    "Impossible",
    "InverseSystem",
    "LemmaViolation",
    "Limit",
    "SepSysError",
    "SeparationSystem",
    "chain_system",
    "classify",
    "closure",
    "consistent_orientations",
    "essential_core",
    "extend_orientation",
    "is_closed",
    "is_consistent",
    "is_nested",
    "is_star",
    "limit",
    "make_inverse_system",
    "make_poset",
    "sigma_minus",
    "splits_at",
    "splitting_subsets",
    "validate_system",
]
