"""Exact lattice and Chern-class arithmetic for matched pairs of building blocks.

The package checks, with exact integer arithmetic only, the lattice data of a
matched pair of rank-2 Fano-type building blocks (orthogonal pushout,
primitive embeddability into the K3 lattice) and the Chern-class data of
rigid stable bundles on them, and emits JSON certificates.
"""

from .bundle import (
    BundleCertificate,
    StabilityReport,
    discriminant_delta,
    gcd_condition,
    kuleshov_c2,
    stability_check,
    verify_bundle,
)
from .catalog import (
    Catalog,
    CatalogEntry,
    builtin_paper_catalog,
    deserialize_certificate,
    parse_catalog,
    serialize_certificate,
)
from .lattice import (
    E8,
    HYPERBOLIC_PLANE,
    K3_LATTICE,
    IntegralLattice,
    Signature,
    basic_invariants,
    discriminant_group,
    divisibility,
    gram_in_basis,
    known_lattices,
    max_square_negative_definite,
    orthogonal_complement,
    overlattice_from_glue,
    smith_normal_form,
    sublattice_index,
)
from .matching import (
    BlockLatticeData,
    MatchingCertificate,
    ample_orthogonal_generator,
    check_matching,
    nikulin_embeddable,
    orthogonal_pushout,
)
from .search import SearchParams, run_search, verify_paper_example

__version__ = "0.1.0"
