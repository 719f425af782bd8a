"""Toric K-stability toolkit for labelled polygons.

Verifies the existence machinery for conformally Kahler Einstein-Maxwell
metrics on Hirzebruch-type trapezoids at the polytope level: weighted
Donaldson-Futaki invariants, the f-twist transform, equipoised and
K-stability checks, and numerical recovery of the explicit affine families.
"""

from .affine import ONE, AffineMap2
from .errors import (
    ConditionANotMet,
    DegeneratePolytope,
    EmptyInterior,
    IllConditioned,
    InvalidPolytope,
    NegativeDiscriminant,
    NoConvergence,
    NonPositiveWeight,
    NotAQuadrilateral,
    NotInterior,
    OriginNotInterior,
    ParameterOutOfDomain,
    ParameterOutOfRange,
    RedundantLabel,
    SingularHessian,
    StepTooLarge,
    ToleranceNotReached,
    TorickError,
    UnboundedRegion,
    VertexZero,
    ZeroConstantTerm,
)
from .families import (
    E_b,
    F_k,
    FamilyId,
    equipoised_check,
    family_domain,
    family_f,
    family_grid,
    identity_e2,
    positivity_scan_case12,
    r_k,
)
from .futaki import (
    CreaseFunction,
    ExtremalAffine,
    ckem_constant,
    crease_scan,
    df_invariant,
    extremal_affine,
)
from .polytope import (
    LabelledPolytope2,
    QuadType,
    classify_quadrilateral,
    from_halfplanes,
    hirzebruch_delzant,
    is_integral_delzant,
    min_over_vertices,
    translate_polytope,
)
from .quadrature import QuadratureResult, WeightSpec, integrate_boundary, integrate_interior
from .solver import (
    ConditionASolution,
    ExtremalPair,
    check_extremal_pair,
    solve_condition_a,
    stability_verdict,
)
from .twist import (
    TwistMap,
    check_df_covariance,
    check_hessian_det_law,
    twist_affine,
    twist_polytope,
    twist_scalar,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap2",
    "ONE",
    "LabelledPolytope2",
    "QuadType",
    "WeightSpec",
    "QuadratureResult",
    "ExtremalAffine",
    "CreaseFunction",
    "FamilyId",
    "ConditionASolution",
    "ExtremalPair",
    "TwistMap",
    "from_halfplanes",
    "hirzebruch_delzant",
    "min_over_vertices",
    "classify_quadrilateral",
    "is_integral_delzant",
    "translate_polytope",
    "integrate_interior",
    "integrate_boundary",
    "extremal_affine",
    "df_invariant",
    "ckem_constant",
    "crease_scan",
    "twist_affine",
    "twist_polytope",
    "twist_scalar",
    "check_hessian_det_law",
    "check_df_covariance",
    "F_k",
    "r_k",
    "E_b",
    "family_f",
    "family_domain",
    "family_grid",
    "equipoised_check",
    "identity_e2",
    "positivity_scan_case12",
    "solve_condition_a",
    "check_extremal_pair",
    "stability_verdict",
    "TorickError",
    "InvalidPolytope",
    "UnboundedRegion",
    "EmptyInterior",
    "RedundantLabel",
    "ParameterOutOfRange",
    "NotAQuadrilateral",
    "NonPositiveWeight",
    "ToleranceNotReached",
    "IllConditioned",
    "NotInterior",
    "SingularHessian",
    "StepTooLarge",
    "ZeroConstantTerm",
    "OriginNotInterior",
    "ParameterOutOfDomain",
    "NegativeDiscriminant",
    "VertexZero",
    "NoConvergence",
    "DegeneratePolytope",
    "ConditionANotMet",
    "__version__",
]
