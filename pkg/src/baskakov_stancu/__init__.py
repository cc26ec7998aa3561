"""Generalized Baskakov-type operators with shifted evaluation nodes.

Library plus CLI for evaluating the operator family, auditing its moment
identity catalog against a brute-force series oracle, estimating moduli
of smoothness, and running error-bound and asymptotic convergence
studies.
"""

from .basis import (
    OperatorParams,
    TruncationPolicy,
    WeightSeries,
    basis_weight,
    basis_weight_direct,
    p_poly,
    pochhammer,
    weight_prefix_mass,
)
from .functions import (
    FunctionDSLError,
    FunctionSpec,
    abs_shift,
    derivative_spec,
    exp_decay,
    parse_function,
    polynomial,
    sqrt1p,
)
from .moments import (
    MomentReport,
    asymptotic_limit,
    audit_lemma,
    central_moment_closed,
    central_moment_derived,
    central_moment_oracle,
    raw_moment_closed,
    raw_moment_mihesan,
    raw_moment_mihesan_t4_corrected,
    raw_moment_oracle,
    richardson_limit,
)
from .operators import (
    EvalResult,
    NonConvergenceError,
    apply,
    apply_centered,
    apply_grid,
    apply_mihesan,
)
from .smoothness import (
    Window,
    ditzian_totik_modulus,
    kfunctional_upper,
    modulus_continuity,
    modulus_derivative,
    step_weight,
)
from .theorems import (
    BoundReport,
    RateComparison,
    Thm41Point,
    VoronovskayaReport,
    bound_thm31,
    bound_thm32,
    bound_thm41,
    default_n_ladder,
    default_window,
    gamma_thm31,
    mihesan_remark_bound,
    remark_rate_comparison,
    voronovskaya,
    voronovskaya_target,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "EvalResult",
    "FunctionDSLError",
    "FunctionSpec",
    "MomentReport",
    "NonConvergenceError",
    "OperatorParams",
    "RateComparison",
    "TruncationPolicy",
    "VoronovskayaReport",
    "WeightSeries",
    "Window",
    "abs_shift",
    "apply",
    "apply_centered",
    "apply_grid",
    "apply_mihesan",
    "asymptotic_limit",
    "audit_lemma",
    "basis_weight",
    "basis_weight_direct",
    "Thm41Point",
    "bound_thm31",
    "bound_thm32",
    "bound_thm41",
    "central_moment_closed",
    "central_moment_derived",
    "central_moment_oracle",
    "default_n_ladder",
    "default_window",
    "derivative_spec",
    "gamma_thm31",
    "mihesan_remark_bound",
    "ditzian_totik_modulus",
    "exp_decay",
    "kfunctional_upper",
    "modulus_continuity",
    "modulus_derivative",
    "p_poly",
    "parse_function",
    "pochhammer",
    "polynomial",
    "raw_moment_closed",
    "raw_moment_mihesan",
    "raw_moment_mihesan_t4_corrected",
    "raw_moment_oracle",
    "remark_rate_comparison",
    "richardson_limit",
    "sqrt1p",
    "step_weight",
    "voronovskaya",
    "voronovskaya_target",
    "weight_prefix_mass",
]
