"""Semi-inner-product calculus on weighted l^p spaces and a representer-based
solver for regularised interpolation, with numerical verification probes."""

from sip_interp.space import (
    SpaceConfig,
    Vector,
    DualVector,
    dual_space,
    norm,
    sip,
    duality_map,
    inverse_duality_map,
    dual_norm,
    tangent_component,
    JamesOrthogonality,
    james_orthogonality_check,
    orthogonal_decompose,
    modulus_of_smoothness_estimate,
    duality_continuity_probe,
    axiom_suite,
)
from sip_interp.regularisers import (
    PowerProfile,
    PiecewiseProfile,
    Regulariser,
    ProbeReport,
    evaluate,
    tangential_monotonicity_probe,
    norm_monotonicity_probe,
    mollify_radial,
    builtin_custom,
)
from sip_interp.solver import (
    InterpolationProblem,
    SolverConfig,
    Solution,
    InfeasibleError,
    SolverConvergenceError,
    NotAdmissibleError,
    solve_min_norm,
    solve_regularised,
    peaking_gap,
    verify_representer,
)
from sip_interp.oracle import (
    OracleConfig,
    OracleInfeasibleError,
    solve_constrained_direct,
    grid_min,
)

__version__ = "0.1.0"

__all__ = [
    "SpaceConfig",
    "Vector",
    "DualVector",
    "dual_space",
    "norm",
    "sip",
    "duality_map",
    "inverse_duality_map",
    "dual_norm",
    "tangent_component",
    "JamesOrthogonality",
    "james_orthogonality_check",
    "orthogonal_decompose",
    "modulus_of_smoothness_estimate",
    "duality_continuity_probe",
    "axiom_suite",
    "PowerProfile",
    "PiecewiseProfile",
    "Regulariser",
    "ProbeReport",
    "evaluate",
    "tangential_monotonicity_probe",
    "norm_monotonicity_probe",
    "mollify_radial",
    "builtin_custom",
    "InterpolationProblem",
    "SolverConfig",
    "Solution",
    "InfeasibleError",
    "SolverConvergenceError",
    "NotAdmissibleError",
    "solve_min_norm",
    "solve_regularised",
    "peaking_gap",
    "verify_representer",
    "OracleConfig",
    "OracleInfeasibleError",
    "solve_constrained_direct",
    "grid_min",
    "__version__",
]
