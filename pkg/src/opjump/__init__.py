"""Recurrence coefficients for monic polynomials orthogonal under the
Hermite weight with a jump: a fast difference-equation path, a high-precision
moment oracle to check it against, and the deformation machinery (Toda
flows, Painleve IV, Hankel functionals, large-n asymptotics) built on both.
"""

from .core import (
    GUARD_BITS,
    CoeffTable,
    MomentVector,
    PrecisionConfig,
    PrecisionExhaustionError,
    WeightSpec,
    erfc_ext,
    eval_weight,
    gaussian_moments,
    incomplete_integrals,
    moments,
)
from .oracle import (
    MonicPolySeq,
    PositivityBreakdownError,
    hankel_det_direct,
    hankel_dets,
    jump_quantities,
    oracle_table,
    orthogonalize,
)
from .recurrence import (
    DivisionBreakdownError,
    LadderCoeffs,
    PoleProximityError,
    PrecisionDegradationWarning,
    alpha0,
    compatibility_residuals,
    iterate,
    ladder_coeffs,
    universal_residuals,
)

__all__ = [
    "GUARD_BITS",
    "CoeffTable",
    "MomentVector",
    "MonicPolySeq",
    "PrecisionConfig",
    "WeightSpec",
    "LadderCoeffs",
    "PrecisionExhaustionError",
    "PositivityBreakdownError",
    "DivisionBreakdownError",
    "PoleProximityError",
    "PrecisionDegradationWarning",
    "alpha0",
    "compatibility_residuals",
    "erfc_ext",
    "eval_weight",
    "gaussian_moments",
    "hankel_det_direct",
    "hankel_dets",
    "incomplete_integrals",
    "iterate",
    "jump_quantities",
    "ladder_coeffs",
    "moments",
    "oracle_table",
    "orthogonalize",
    "universal_residuals",
]

__version__ = "0.1.0"
