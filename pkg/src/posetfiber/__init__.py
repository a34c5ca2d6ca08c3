"""Certificates for the fiber lemma on finite posets and its simplicial consequences."""

__version__ = "0.1.0"

from .bridge import barycentric_subdivision, face_poset, induced_poset_map, induced_simplicial_map, order_complex
from .complex import (
    CollapseStep,
    Contractibility,
    ContractibilityVerdict,
    SimplicialComplex,
    SimplicialMap,
    build_complex,
    collapse_search,
    contiguous,
    contractibility_verdict,
    is_cone,
    join,
    star_link,
)
from .fiber import (
    CertificationRefused,
    Connectivity,
    FiberReport,
    SimpleEquivalenceCertificate,
    Status,
    certify_simple_equivalence,
    check_fiber_hypothesis,
    check_homology_fiber_hypothesis,
    comparison_homotopy_steps,
    connectivity_verdict,
    verify_homology_conclusion,
)
from .homology import (
    HomologyGroup,
    IntegerMatrix,
    boundary_matrices,
    chain_map_of,
    cone_trivial_up_to,
    reduced_homology,
    smith_normal_form,
)
from .nerve_dowker import (
    Cover,
    Relation,
    check_nerve_hypotheses,
    dowker_complexes,
    dowker_verify,
    nerve,
    nerve_comparison_map,
)
from .poset import (
    MappingCylinder,
    MonotoneMap,
    Poset,
    build_poset,
    cone_sets,
    fiber_below,
    linear_extension,
    mapping_cylinder,
    opposite,
)
from .verify import CertificateError, verify_certificate
