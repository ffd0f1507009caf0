"""Finite model of a manifold of embeddings carrying two inner products.

A weak (pivot) and a strong metric coexist on one finite-dimensional complex
space.  The package builds the pair of Gram matrices, the group of weak
isometries with its exponential and logarithm, embeddings of a reference
subspace (operator and frame pictures), the quotient of projections, local
cross sections of the group action, a series square root with rigorous
truncation bounds, and norm/length tools for curves between embeddings.
"""

from .errors import (
    ConvergenceFailure,
    LogUnavailable,
    NeighborhoodViolation,
    RankDeficiency,
    TwoNormError,
)
from .space import (
    GramPair,
    SpaceSpec,
    adjoint_h1,
    adjoint_l2,
    build_space,
    forward_difference,
    gram_pair_from_matrices,
    h1_operator_norm,
    inner_h1,
    inner_l2,
    l2_operator_norm,
    norm_h1,
    norm_l2,
)
from .basis import complete_basis, orthonormal_columns
from .group import (
    GroupElement,
    SkewOperator,
    algebraic_membership_residual,
    bracket,
    exp_skew,
    frame_unitary,
    is_group_member,
    is_lie_algebra_member,
    membership_residual,
    skew_residual,
)
from .stiefel import (
    MetricEquivalenceReport,
    ReferenceFrame,
    SectionFactors,
    StiefelFrame,
    StiefelOperator,
    act,
    binomial_sqrt,
    binomial_sqrt_truncated,
    cross_section_sigma,
    delta_v,
    frame_to_operator,
    K_map,
    lie_split_stiefel,
    mcscf_validate,
    metric_equivalence_report,
    operator_to_frame,
    projection_lipschitz_report,
    projection_of,
    radius_formula,
    radius_r,
    section_factors,
    series_tail_bound,
    sqrt_F,
    tangent_project,
    translated_section,
    tuple_metric,
)
from .grassmann import (
    EquivalenceResult,
    ProjectionOperator,
    act_grassmann,
    connecting_unitary,
    delta_p,
    grassmann_equivalence,
    lie_split_grassmann,
    phi,
    projection_from_frame,
    psi_section,
    range_frame,
    section_pi_p,
    tangent_project_grassmann,
)
from .geometry import (
    CurveSamples,
    NormSpec,
    SandwichReport,
    curve_length,
    distance_upper,
    exp_curve,
    finsler_norm_grassmann,
    finsler_norm_stiefel,
    group_log,
    h1_singular_values,
    norm_sandwich_check,
    riemannian_inner_grassmann,
    riemannian_inner_stiefel,
    schatten_norm,
)
from .oracles import adjoint_by_definition, pinv_on_range, sqrt_eig
from .config import DEFAULT_TOLERANCES, RunConfig, config_from_mapping, load_config
from .validate import SuiteResult, run_suites

__version__ = "1.0.0"

__all__ = [
    "TwoNormError",
    "NeighborhoodViolation",
    "RankDeficiency",
    "LogUnavailable",
    "ConvergenceFailure",
    "SpaceSpec",
    "GramPair",
    "build_space",
    "gram_pair_from_matrices",
    "forward_difference",
    "inner_l2",
    "inner_h1",
    "norm_l2",
    "norm_h1",
    "adjoint_l2",
    "adjoint_h1",
    "l2_operator_norm",
    "h1_operator_norm",
    "complete_basis",
    "orthonormal_columns",
    "GroupElement",
    "SkewOperator",
    "bracket",
    "exp_skew",
    "frame_unitary",
    "membership_residual",
    "skew_residual",
    "is_group_member",
    "is_lie_algebra_member",
    "algebraic_membership_residual",
    "ReferenceFrame",
    "StiefelFrame",
    "StiefelOperator",
    "frame_to_operator",
    "operator_to_frame",
    "tuple_metric",
    "MetricEquivalenceReport",
    "metric_equivalence_report",
    "act",
    "projection_of",
    "projection_lipschitz_report",
    "binomial_sqrt",
    "binomial_sqrt_truncated",
    "series_tail_bound",
    "sqrt_F",
    "radius_formula",
    "radius_r",
    "SectionFactors",
    "section_factors",
    "cross_section_sigma",
    "translated_section",
    "delta_v",
    "K_map",
    "tangent_project",
    "lie_split_stiefel",
    "mcscf_validate",
    "ProjectionOperator",
    "projection_from_frame",
    "range_frame",
    "phi",
    "psi_section",
    "EquivalenceResult",
    "grassmann_equivalence",
    "act_grassmann",
    "connecting_unitary",
    "section_pi_p",
    "delta_p",
    "tangent_project_grassmann",
    "lie_split_grassmann",
    "NormSpec",
    "h1_singular_values",
    "schatten_norm",
    "SandwichReport",
    "norm_sandwich_check",
    "finsler_norm_stiefel",
    "finsler_norm_grassmann",
    "riemannian_inner_stiefel",
    "riemannian_inner_grassmann",
    "CurveSamples",
    "exp_curve",
    "curve_length",
    "group_log",
    "distance_upper",
    "adjoint_by_definition",
    "sqrt_eig",
    "pinv_on_range",
    "RunConfig",
    "DEFAULT_TOLERANCES",
    "config_from_mapping",
    "load_config",
    "SuiteResult",
    "run_suites",
    "__version__",
]
