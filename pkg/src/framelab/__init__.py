"""Numerical frame analysis on weighted grids.

The package studies tensor families of coefficient functionals over a
discretized weighted space: when the node weights are pinched between
positive bounds the family is a frame (indeed a Riesz basis), when the
weight is identically one it is an orthonormal basis, and when the weight
dips the package produces an explicit witness field.  Two application
front ends reduce integer-translate systems and dilated center-translate
systems to the same weight picture, and a small CLI drives everything
from JSON configs.
"""

from .analyzer import (
    FrameReport,
    Verdict,
    classify,
    decide_frame,
    decide_onb,
    decide_riesz,
    decide_scalar_frame,
    gram_bounds,
    synthesis_gram,
    weight_bounds,
    witness_lower_failure,
    witness_ratio,
    witness_upper_failure,
)
from .errors import ConsistencyError, TruncationError
from .operators import (
    OperatorFamily,
    analysis_matrix,
    bessel_excess,
    frame_spectrum,
    lambda_adjoint,
    lambda_all,
    lambda_coeff,
    lambda_tilde,
    lambda_tilde_adjoint,
    parseval_residual,
)
from .tensor_onb import (
    TensorBasis,
    build_default,
    build_weighted,
    coefficients,
    reconstruct,
    tensor_field,
    verify_tensor_onb,
    verify_weighted_onb,
)
from .wspace import Field, WeightedSpace, inner, norm, random_field, total_mass

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "TruncationError",
    "WeightedSpace",
    "Field",
    "inner",
    "norm",
    "total_mass",
    "random_field",
    "TensorBasis",
    "build_default",
    "build_weighted",
    "tensor_field",
    "coefficients",
    "reconstruct",
    "verify_tensor_onb",
    "verify_weighted_onb",
    "OperatorFamily",
    "lambda_tilde",
    "lambda_coeff",
    "lambda_all",
    "lambda_tilde_adjoint",
    "lambda_adjoint",
    "analysis_matrix",
    "frame_spectrum",
    "parseval_residual",
    "bessel_excess",
    "Verdict",
    "FrameReport",
    "weight_bounds",
    "synthesis_gram",
    "gram_bounds",
    "witness_ratio",
    "witness_lower_failure",
    "witness_upper_failure",
    "decide_frame",
    "decide_riesz",
    "decide_onb",
    "decide_scalar_frame",
    "classify",
    "__version__",
]
