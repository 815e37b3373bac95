"""sector-lab: quantum sectors on combinatorial configuration spaces.

Classifies sectors by unitary representations of the fundamental group of a
finite 2-complex, realizes each sector as a flat unitary connection with its
twisted Laplacian spectrum, and verifies the covering-space (gauge-group)
construction: regular-representation decomposition for finite groups, the
random-walk amenability criterion, and non-l2 sector models beyond it.
"""

from .complexes import (
    ConfigComplex,
    Dart,
    Region,
    build_cycle,
    build_grid_with_holes,
    build_path,
    build_presentation_complex,
    build_two_particle_space,
    region_from_vertices,
    star_region,
)
from .cover import (
    AmenabilityReport,
    CoverModel,
    RegularAction,
    amenability_report,
    build_cover,
    central_projectors,
    conjugacy_check,
    decompose_cover_spectrum,
    kesten_estimate,
    lift_edge_move,
    lift_function,
    non_l2_representation,
    verify_gauge_commutes,
    word_ball,
)
from .groups import (
    CyclicGroup,
    FiniteTableGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupBackend,
    abelianization,
    character_table,
    parse_word,
    simplify_presentation,
    word_to_text,
)
from .holonomy import (
    FlatConnection,
    GaugeField,
    UnitaryRep,
    character_rep,
    cocycle_from_rep,
    equivalence_fingerprint,
    fingerprint_distance,
    gauge_transform,
    ls_check,
    random_gauge,
    random_unitary,
    topological_operator,
    transport,
    tree_gauge,
    trivial_rep,
    two_dim_reflection_rep,
    verify_cocycle,
)
from .pi1 import (
    PathWord,
    Pi1Presentation,
    attach_backend,
    base_path,
    based_loop_from_word,
    dart_class,
    finite_backend_from_presentation,
    guess_backend,
    is_simply_connected,
    loop_class,
    loop_word,
    presentation_homology,
    reduce_word,
    spanning_tree,
)
from .sectors import (
    HermitianOperator,
    SectorSpace,
    cluster_eigenvalues,
    sector_compare,
    spectrum,
    twisted_laplacian,
)

__version__ = "0.1.0"
