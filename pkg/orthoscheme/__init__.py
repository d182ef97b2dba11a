"""
Django Orthoscheme - intrinsic volumes of the path-simplex orthoscheme

This package provides:
- Exact intrinsic volumes by composition sums, enumerated or by dynamic programming
- Monte Carlo Gaussian measures of every normal cone, seeded and thread-count independent
- Exact solid angles for low-dimensional cones and the McMullen assembly
- Root location of the quermassintegral polynomial
- The Brownian motion limit and its m_k sequence
- A management command producing JSON/CSV reports and a reproduction suite
"""

__version__ = "0.1.0"
__license__ = "MIT"

from .exceptions import (
    BudgetExceeded,
    CacheKeyValidationError,
    InvalidDimension,
    OrthoschemeException,
    RootPrecisionFailure,
)
from .geometry import intrinsic_volume, intrinsic_volumes_all, sample_faces, sy_check

__all__ = [
    "BudgetExceeded",
    "CacheKeyValidationError",
    "InvalidDimension",
    "OrthoschemeException",
    "RootPrecisionFailure",
    "intrinsic_volume",
    "intrinsic_volumes_all",
    "sample_faces",
    "sy_check",
]
