"""Numerical radius and Davis-Wielandt radius computations for complex
matrices under pluggable norms, with an inequality catalog and a
deterministic fuzz harness."""

from .linalg import (
    HermEig,
    NoConvergenceError,
    NotHermitianError,
    abs_op,
    adjoint,
    as_operator,
    fro_norm,
    herm_eig,
    imag_part,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    real_part,
    rotate,
    save_matrix,
    singular_values,
)
from .norms import (
    FROBENIUS,
    NUMERICAL_RADIUS,
    OPERATOR,
    TRACE,
    AxiomViolation,
    NormSpec,
    check_norm_axioms,
    eval_norm,
    parse_norm,
    schatten,
)
from .radii import (
    OptimizerStallError,
    RadiusResult,
    brute_force_dw,
    brute_force_w,
    classical_dw_radius,
    dw_support_value,
    generalized_dw_radius,
    generalized_numerical_radius,
    imag_form_dw_radius,
    numerical_radius,
)
from .bounds import (
    CATALOG,
    BoundId,
    BoundReport,
    DiagnosticFailedError,
    EqualityDiagnostics,
    MDQuadruple,
    UnknownBoundError,
    compute_md,
    equality_diagnostics,
    evaluate_all,
    evaluate_bound,
    evaluate_matrix,
    refuted_upper_value,
    report_to_dict,
    reports_to_json_lines,
)
from .harness import (
    CLASSES,
    DEFAULT_NORMS,
    CellStats,
    FuzzAborted,
    FuzzConfig,
    FuzzReport,
    SharpnessWitness,
    gen_matrix,
    matrix_digest,
    run_fuzz,
    sharpness_scan,
)

__version__ = "0.1.0"

__all__ = [
    "HermEig", "NoConvergenceError", "NotHermitianError", "abs_op", "adjoint",
    "as_operator", "fro_norm", "herm_eig", "imag_part", "load_matrix",
    "matrix_from_json", "matrix_to_json", "real_part", "rotate", "save_matrix",
    "singular_values",
    "FROBENIUS", "NUMERICAL_RADIUS", "OPERATOR", "TRACE", "AxiomViolation",
    "NormSpec", "check_norm_axioms", "eval_norm", "parse_norm", "schatten",
    "OptimizerStallError", "RadiusResult", "brute_force_dw", "brute_force_w",
    "classical_dw_radius", "dw_support_value", "generalized_dw_radius",
    "generalized_numerical_radius", "imag_form_dw_radius", "numerical_radius",
    "CATALOG", "BoundId", "BoundReport", "DiagnosticFailedError",
    "EqualityDiagnostics", "MDQuadruple", "UnknownBoundError", "compute_md",
    "equality_diagnostics", "evaluate_all", "evaluate_bound", "evaluate_matrix",
    "refuted_upper_value", "report_to_dict", "reports_to_json_lines",
    "CLASSES", "DEFAULT_NORMS", "CellStats", "FuzzAborted", "FuzzConfig",
    "FuzzReport", "SharpnessWitness", "gen_matrix", "matrix_digest",
    "run_fuzz", "sharpness_scan",
    "__version__",
]
