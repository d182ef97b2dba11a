"""Cached entry points used by the command line and the acceptance suite"""

from orthoscheme.decorators import cached_computation
from orthoscheme.geometry.exact import (
    DEFAULT_TERM_BUDGET,
    IntrinsicVolumes,
    Method,
    intrinsic_volume,
    intrinsic_volumes_all,
)
from orthoscheme.geometry.orthoscheme import circumradius, inradius
from orthoscheme.geometry.sangwine_yager import (
    DEFAULT_IMAG_THRESHOLD,
    DEFAULT_MPMATH_DPS,
    DEFAULT_RESIDUAL_TOLERANCE,
    DEFAULT_SLACK,
    SYReport,
    sy_check,
)


@cached_computation()
def exact_volumes(n: int, method: str = Method.DP.value, term_budget: int = DEFAULT_TERM_BUDGET) -> IntrinsicVolumes:
    return intrinsic_volumes_all(n, method, term_budget=term_budget)


@cached_computation()
def exact_volume(n: int, k: int, method: str = Method.DP.value, term_budget: int = DEFAULT_TERM_BUDGET) -> float:
    """A single ``V_k``; enumeration only visits the compositions of length k."""
    return intrinsic_volume(n, k, method, term_budget=term_budget)


@cached_computation()
def radii(n: int) -> tuple[float, float]:
    """``(inradius, circumradius)``"""
    return inradius(n), circumradius(n)


@cached_computation()
def sy_report(
    n: int,
    imag_threshold: float = DEFAULT_IMAG_THRESHOLD,
    slack: float = DEFAULT_SLACK,
    tolerance: float = DEFAULT_RESIDUAL_TOLERANCE,
    dps: int = DEFAULT_MPMATH_DPS,
) -> SYReport:
    return sy_check(n, imag_threshold, slack, tolerance=tolerance, dps=dps, radii=radii(n))
