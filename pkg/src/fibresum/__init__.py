"""Exact-arithmetic toolkit for torus fibre sums of four-manifolds.

Builds invariant records for four-manifolds, performs fibre sums with
rational elliptic pieces along square-zero tori, enumerates the first
Chern classes of the resulting symplectic structures over orientation
sign choices, and certifies divisibility-based lower bounds on the
number of components of the moduli space of symplectic forms. A
companion geometry module computes linking numbers of polygonal links
two independent ways to back the torus homology relations used by the
constructions.
"""

from .construct import (
    EnumerationResult,
    HypothesisReport,
    SolveResult,
    build_theorem_recipe,
    check_hypotheses,
    enumerate_forms,
    mcmullen_taubes_recipe,
    pi0_lower_bound,
    solve_signs,
)
from .errors import (
    ConfigError,
    EmbeddingError,
    EnumerationCapError,
    FibresumError,
    GenericityError,
    IllConditionedError,
    MathematicalInconsistencyError,
    OrientationError,
    RecipeError,
)
from .fourman import (
    LAGRANGIAN,
    SYMPLECTIC,
    EmbeddedTorus,
    FourManifold,
    build_e1,
    build_t4,
    form_parity,
    validate,
)
from .gompfsum import (
    CheckReport,
    FormClass,
    Gluing,
    SumRecipe,
    check_c1_identities,
    perform_recipe,
    sum_c1,
    sum_invariants,
    with_signs,
)
from .intlat import (
    DivisibilityReport,
    IntVector,
    PairingMatrix,
    SmithDecomposition,
    divisibility_bounds,
    gcd_content,
    rank,
    smith_normal_form,
)
from .linkgeom import (
    PolygonalCurve,
    PolygonalLink,
    borromean_axis,
    borromean_rings,
    derive_torus_relation,
    h1_coordinates,
    hopf_link,
    linking_number_crossings,
    linking_number_gauss,
    linking_number_verified,
    load_link,
    split_link,
)

__version__ = "0.1.0"
