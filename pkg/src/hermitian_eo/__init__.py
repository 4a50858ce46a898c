"""Exact computation of the Frobenius/Verschiebung module structure, block
decomposition, and Ekedahl-Oort type for the curves y^q + y = x^(q+1)."""

from .blocks import (
    binary_vector,
    block_dimension,
    block_id_of_vector,
    block_table,
    vector_of_block_id,
    verify_block_action,
)
from .derham import (
    BasisElement,
    DeRhamOperators,
    SemilinearMap,
    a_number_formula,
    basis_elements,
    build_operators,
    cartier_oracle,
    cartier_rank,
    cartier_rank_formula,
    genus,
    lattice_points,
)
from .eo import (
    EOType,
    WeightedPermutationModule,
    canonical_filtration,
    decomposition,
    eo_type,
    from_derham,
    from_orbits,
    verify_main_theorem,
)
from .errors import ConsistencyError, VerificationFailure
from .orbits import (
    Orbit,
    embed_short_orbit,
    enumerate_orbits,
    factor_presentation,
    multiplicity,
    orbit_signature,
    orbit_stats,
)
from .padic import PAdicDigits, binom_mod, carry_bit, carry_comparisons, expand
from .reports import ReportBundle, applications_report

__version__ = "0.1.0"

__all__ = [
    "BasisElement",
    "ConsistencyError",
    "DeRhamOperators",
    "EOType",
    "Orbit",
    "PAdicDigits",
    "ReportBundle",
    "SemilinearMap",
    "VerificationFailure",
    "WeightedPermutationModule",
    "a_number_formula",
    "applications_report",
    "basis_elements",
    "binary_vector",
    "binom_mod",
    "block_dimension",
    "block_id_of_vector",
    "block_table",
    "build_operators",
    "canonical_filtration",
    "carry_bit",
    "carry_comparisons",
    "cartier_oracle",
    "cartier_rank",
    "cartier_rank_formula",
    "decomposition",
    "embed_short_orbit",
    "enumerate_orbits",
    "eo_type",
    "expand",
    "factor_presentation",
    "from_derham",
    "from_orbits",
    "genus",
    "lattice_points",
    "multiplicity",
    "orbit_signature",
    "orbit_stats",
    "vector_of_block_id",
    "verify_block_action",
    "verify_main_theorem",
]
