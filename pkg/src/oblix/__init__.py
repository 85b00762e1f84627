"""Scaled projections, subspace angles, compatibility constants and frame bounds."""

__version__ = "0.1.0"

from .exceptions import (
    AmbientMismatch,
    DegenerateAngle,
    IdentityViolation,
    Incompatible,
    InvalidInput,
    InvalidParameter,
    InvalidWeight,
    NotAFrame,
    NotFullRank,
    NumericalUnderflow,
    OblixError,
    ParseError,
    PreconditionFailed,
    SingularGram,
    TooLarge,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    nullspace,
    numerical_rank,
    operator_norm,
    orthonormal_range,
    pinv,
    reduced_min_modulus,
    svd,
)
from .subspace import (
    alternating_projection_error,
    angle_pair,
    dixmier_cos,
    friedrichs_cos,
    friedrichs_sin,
    gamma_sandwich,
    intersect,
    position_pprime,
)
from .oblique import (
    DiagonalWeight,
    ObliqueProjection,
    compatibility,
    compression_check,
    distinguished_projection,
    ljance_ptak_norm,
    projection_family,
    weighted_projection,
)
from .bounds import (
    IndexSet,
    TailRule,
    bental_teboulle,
    complex_cone_duality,
    enumerate_JA,
    equi2_check,
    k_constant_from_angles,
    m_I,
    semidefinite_limit_check,
    stewart_oleary,
    truncation_growth,
)
from .frames import (
    FrameSystem,
    frame_bounds,
    frame_from_nullspace,
    nullspace_tail_experiment,
    riesz_compatibility_equivalence,
    riesz_constant,
    subset_bounds,
)
