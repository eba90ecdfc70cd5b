"""Exact minimal-projection machinery for subspaces of finite ell_inf spaces.

The package computes relative projection constants by exact rational linear
programming, certifies the zero-sum amplification law lambda(Sigma_N(E)) =
(2 - 2/N) lambda(E), plans amplification schedules toward a rational target,
and carries the optimised two-parameter decomposition bound together with an
exact sequence-space model realising it.
"""

from .banach_mazur import (
    BMParameterSet,
    NonExactParameterError,
    SeqOperator,
    bm_params,
    bound_g,
    build_model,
    compare_with_prior_bound,
    operator_norm_window,
    optimize_closed_form,
    optimize_numeric,
    verify_inverse,
)
from .linalg import (
    Mat,
    RankDeficientError,
    Subspace,
    format_rational,
    inf_op_norm,
    parse_rational,
)
from .minproj import (
    BudgetExceededError,
    LPBudget,
    OracleConfig,
    OracleInconclusive,
    ProjectionConstantResult,
    SolverIntegrityError,
    float_oracle,
    projection_constant,
)
from .planner import (
    AmplificationPlan,
    BaseConstantMismatch,
    PlanRangeError,
    ad_hoc_plan,
    demonstrate_schedule,
    interleave_isometry,
    plan_parameters,
)
from .zerosum import (
    ZeroSumSpace,
    amplification_factor,
    centring_projection,
    coordinate_sum_kernel,
    extract_r,
    sigma_subspace,
    symmetrize,
    verify_multiplication_law,
)

__version__ = "0.1.0"

__all__ = [
    "AmplificationPlan",
    "BMParameterSet",
    "BaseConstantMismatch",
    "BudgetExceededError",
    "LPBudget",
    "Mat",
    "NonExactParameterError",
    "OracleConfig",
    "OracleInconclusive",
    "PlanRangeError",
    "ProjectionConstantResult",
    "RankDeficientError",
    "SeqOperator",
    "SolverIntegrityError",
    "Subspace",
    "ZeroSumSpace",
    "ad_hoc_plan",
    "amplification_factor",
    "bm_params",
    "bound_g",
    "build_model",
    "centring_projection",
    "compare_with_prior_bound",
    "coordinate_sum_kernel",
    "demonstrate_schedule",
    "extract_r",
    "float_oracle",
    "format_rational",
    "inf_op_norm",
    "interleave_isometry",
    "operator_norm_window",
    "optimize_closed_form",
    "optimize_numeric",
    "parse_rational",
    "plan_parameters",
    "projection_constant",
    "sigma_subspace",
    "symmetrize",
    "verify_inverse",
    "verify_multiplication_law",
]
