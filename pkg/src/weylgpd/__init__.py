"""weylgpd: Cartan graphs, root systems, and exact chamber geometry.

The package realizes both directions of the correspondence between connected
simply connected Cartan graphs admitting a root system and crystallographic
simplicial arrangements: generate real roots and chambers from a graph, or
recover the graph from a table of root covectors, entirely in exact rational
arithmetic.
"""

from ._rational import BACKEND, Rat, rat
from .arrangement import (
    Affine,
    Chamber,
    Gallery,
    RootSystemTable,
    Spherical,
    Truncated,
    adjacent_chamber,
    cartan_matrix_at,
    chamber_from_point,
    check_additive,
    check_crystallographic,
    check_k_spherical,
    distance_and_gallery,
    extract_cartan_graph,
    is_nondegenerate,
    radical,
    verify_combinatorial_equivalence,
    walls_and_root_basis,
)
from .cartan import (
    CartanGraph,
    GeneralizedCartanMatrix,
    Morphism,
    RealRootSet,
    check_root_system_axioms,
    check_simply_connected,
    generate_real_roots,
    m_ij,
    m_ij_certified,
    reflect,
    residue,
    validate_gcm,
)
from .exactlin import (
    dual_basis,
    primitive_normalize,
    primitive_ray,
    sign_at,
    solve_coordinates,
    vec,
)
from .realization import (
    Realization,
    adjacency_equivalences_test,
    local_cartan_graph_at,
    locate_point,
    realize,
    roundtrip_check,
    separating_set,
)
from .subarr import (
    Localization,
    Restriction,
    check_localization_crystallographic,
    check_restriction_crystallographic,
    double_restriction,
    identify_rank2,
    local_to_global_check,
    localize,
    reduce,
    residue_correspondence_check,
    restrict,
)

__version__ = "0.1.0"
