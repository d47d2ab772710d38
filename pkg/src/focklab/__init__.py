"""Engineered bosonic states in a truncated Fock basis.

Construction of photon-added/subtracted/filtered states, moment-based
nonclassicality witnesses, Husimi-Q and phase-distribution analysis, and
beam-splitter entanglement potential, each closed form paired with a
brute-force operator oracle.
"""

from .core import (
    DEFAULT_POLICY,
    StateVector,
    TruncationPolicy,
    apply_annihilate,
    apply_create,
    make_fock,
    photon_number_distribution,
)
from .states import (
    FAMILIES,
    StateSpec,
    build_by_composition,
    build_state,
    displacement_coefficients,
)

__all__ = [
    "DEFAULT_POLICY",
    "FAMILIES",
    "StateSpec",
    "StateVector",
    "TruncationPolicy",
    "apply_annihilate",
    "apply_create",
    "build_by_composition",
    "build_state",
    "displacement_coefficients",
    "make_fock",
    "photon_number_distribution",
]

__version__ = "0.1.0"
