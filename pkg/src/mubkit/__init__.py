"""Mutually unbiased bases for N qupits: construction, checks, classification."""

from .complement import (
    Complement,
    average_purity,
    complement_distribution,
    enumerate_lagrangians,
    field_spread,
    lagrangian_count,
    purity_census,
    search_spreads,
    verify_spread,
)
from .errors import (
    CensusViolationError,
    DependentGeneratorsError,
    GuardExceededError,
    InfeasibleError,
    MubkitError,
    NonCommutingError,
    PauliParseError,
    ProjectorNotRankOneError,
    SameGroupError,
    TheoremViolationError,
)
from .groups import (
    CompatGroup,
    classify_basis,
    group_from_generators,
    nbody_profile,
    qupit_factor_distribution,
    random_lagrangian,
    separation_pattern,
    validate_generators,
)
from .hilbert import (
    MubBasis,
    eigenbasis,
    eigenvalue_deviation,
    mub_check,
    operator_matrix,
    qupit_purities,
    reduced_density,
)
from .pauli import PauliOp, compose, format_pauli, parse_pauli, symplectic_form
from .stoich import (
    ProfileTable,
    count_solutions,
    derived_equations,
    enumerate_solutions,
    extremize,
    profile_table,
    variant_assignment,
)
from .zplinalg import ExtField, SystemParams, is_prime

__version__ = "0.1.0"

__all__ = [
    "CensusViolationError",
    "CompatGroup",
    "Complement",
    "DependentGeneratorsError",
    "ExtField",
    "GuardExceededError",
    "InfeasibleError",
    "MubBasis",
    "MubkitError",
    "NonCommutingError",
    "PauliOp",
    "PauliParseError",
    "ProfileTable",
    "ProjectorNotRankOneError",
    "SameGroupError",
    "SystemParams",
    "TheoremViolationError",
    "average_purity",
    "classify_basis",
    "complement_distribution",
    "compose",
    "count_solutions",
    "derived_equations",
    "eigenbasis",
    "eigenvalue_deviation",
    "enumerate_lagrangians",
    "enumerate_solutions",
    "extremize",
    "field_spread",
    "format_pauli",
    "group_from_generators",
    "is_prime",
    "lagrangian_count",
    "mub_check",
    "nbody_profile",
    "operator_matrix",
    "parse_pauli",
    "profile_table",
    "purity_census",
    "qupit_factor_distribution",
    "qupit_purities",
    "random_lagrangian",
    "reduced_density",
    "search_spreads",
    "separation_pattern",
    "validate_generators",
    "variant_assignment",
    "verify_spread",
]
