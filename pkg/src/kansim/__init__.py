"""Finite truncated simplicial sets with Kan, homotopy, homology and
Eilenberg-Mac Lane machinery."""

from .abelian import (
    FinAbGroup,
    GroupElement,
    IntegerMatrix,
    SmithDecomposition,
    format_group,
    parse_group,
    smith_normal_form,
    solve_mod,
    subquotient,
)
from .constructors import (
    boundary_complex,
    complete,
    completion_adjunction_check,
    cone,
    coproduct,
    enumerate_maps,
    horn_complex,
    loop_space,
    path_space,
    point,
    product,
    quotient,
    standard_simplex,
    truncate,
)
from .core import (
    SimplexRef,
    SimplicialMap,
    Skeleton,
    SubcomplexMask,
    TruncatedSimplicialSet,
    basepoint_mask,
    compose,
    dumps,
    identity_map,
    load,
    loads,
    save,
    subcomplex_closure,
    validate,
    validate_map,
)
from .em import (
    compare_sim_spec,
    em_skeleton,
    em_space,
    h_spec,
    is_nullhomotopic,
    mu,
    z_spec,
)
from .homology import (
    abelianization,
    additivity_check,
    chain_complex,
    cohomology,
    cone_acyclicity_check,
    connecting_map,
    homology,
    hurewicz_check,
    hurewicz_map,
)
from .kan import (
    boundary_homomorphism,
    exactness_check,
    find_completions,
    find_filling,
    homotopic,
    homotopic_rel,
    homotopy_group,
    is_cycle,
    is_horn,
    kan_check,
    kan_skeleton_check,
    matrix_lemma_solve,
    minimal_check,
    relative_homotopy_group,
)

__version__ = "0.1.0"
