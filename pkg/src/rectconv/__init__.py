"""Rectangular additive convolution of polynomials with nonnegative roots.

Exact rational arithmetic for the convolution, the S/V/H/W transforms and
the Theta functional, plus Gegenbauer-polynomial tools and randomised
verification of the largest-root inequalities.
"""

from .convolution import ConvolutionParams, basic_convolution_gegenbauer, rect_convolve
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidArgumentError,
    InvariantViolation,
    PoleError,
    RectConvError,
)
from .poly import (
    ExactPolynomial,
    FloatPolynomial,
    RootIsolationConfig,
    cauchy_transform,
    from_roots,
    is_nonneg_rooted,
    max_real_root,
    real_roots,
)
from .transforms import h_eval, maxroot_w, phi, theta, w_polynomial

__all__ = [
    "ConvergenceError",
    "ConvolutionParams",
    "DomainError",
    "ExactPolynomial",
    "FloatPolynomial",
    "InvalidArgumentError",
    "InvariantViolation",
    "PoleError",
    "RectConvError",
    "RootIsolationConfig",
    "basic_convolution_gegenbauer",
    "cauchy_transform",
    "from_roots",
    "h_eval",
    "is_nonneg_rooted",
    "max_real_root",
    "maxroot_w",
    "phi",
    "real_roots",
    "rect_convolve",
    "theta",
    "w_polynomial",
]

__version__ = "0.1.0"
