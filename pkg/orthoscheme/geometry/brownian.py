"""
The Brownian motion body ``K_B``: ``V_k(K_B) = omega_k / k!``.

``K_B`` is the closed convex hull of a crinkled arc. Its discretisation at ``n`` equally
spaced times is the orthoscheme scaled by ``n^(-1/2)``, which is how the exact
composition sums converge to these values.
"""

import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import gammaln, poch

from orthoscheme.exceptions import InvalidDimension
from orthoscheme.geometry.exact import limit_row

logger = logging.getLogger(__name__)

# math.gamma(k/2 + 1) stays finite up to here.
MAX_DIRECT_OMEGA = 340
# Beyond this, omega_k / k! is evaluated through logarithms.
LOG_SPACE_THRESHOLD = 100
SQRT_TWO_PI = math.sqrt(2 * math.pi)
LOG_PI = math.log(math.pi)


def _validate_k(k: int, minimum: int) -> int:
    if isinstance(k, bool) or not isinstance(k, int | np.integer) or k < minimum:
        raise InvalidDimension(f"k must be an integer >= {minimum}, got {k!r}")
    return int(k)


def log_omega(k: int) -> float:
    """``log(omega_k) = (k/2) log(pi) - log Gamma(k/2 + 1)``."""
    k = _validate_k(k, 0)
    return 0.5 * k * LOG_PI - float(gammaln(0.5 * k + 1))


def omega(k: int) -> float:
    """
    Volume of the k-dimensional unit ball, ``pi^(k/2) / Gamma(k/2 + 1)``.

    Large ``k`` goes through :func:`log_omega` and underflows to ``0.0`` past ``k`` of
    about 450; use the log for those.
    """
    k = _validate_k(k, 0)
    if k <= MAX_DIRECT_OMEGA:
        return math.pi ** (0.5 * k) / math.gamma(0.5 * k + 1)
    return math.exp(log_omega(k))


def log_bm_intrinsic_volume(k: int) -> float:
    k = _validate_k(k, 1)
    return log_omega(k) - float(gammaln(k + 1))


def bm_intrinsic_volume(k: int) -> float:
    """``V_k(K_B) = omega_k / k!``."""
    k = _validate_k(k, 1)
    if k > LOG_SPACE_THRESHOLD:
        return math.exp(log_bm_intrinsic_volume(k))
    return omega(k) / math.factorial(k)


def mk_values(k_max: int) -> np.ndarray:
    """
    ``m_k = (k+1) V_{k+1} / V_k = omega_{k+1} / omega_k`` for ``k = 1..k_max``.

    Uses ``omega_{k+1} / omega_k = sqrt(pi) / (k/2 + 1)_{1/2}`` with the Pochhammer symbol,
    which stays finite for every ``k``.
    """
    k_max = _validate_k(k_max, 1)
    k = np.arange(1, k_max + 1, dtype=float)
    return math.sqrt(math.pi) / poch(0.5 * k + 1, 0.5)


def mk_defining_ratio(k: int, dps: int = 30) -> mpmath.mpf:
    """``(k+1) V_{k+1} / V_k`` evaluated term by term in extended precision."""
    k = _validate_k(k, 1)
    with mpmath.workdps(dps):

        def volume(j: int) -> mpmath.mpf:
            return mpmath.pi ** (mpmath.mpf(j) / 2) / mpmath.gamma(mpmath.mpf(j) / 2 + 1) / mpmath.factorial(j)

        return (k + 1) * volume(k + 1) / volume(k)


def mk_gamma_ratio(k: int, dps: int = 30) -> mpmath.mpf:
    """``omega_{k+1} / omega_k`` in extended precision."""
    k = _validate_k(k, 1)
    with mpmath.workdps(dps):
        return mpmath.sqrt(mpmath.pi) * mpmath.gamma(mpmath.mpf(k) / 2 + 1) / mpmath.gamma(mpmath.mpf(k + 1) / 2 + 1)


@dataclass(frozen=True)
class BMVolumeRow:
    """``omega_k`` and ``v_k`` are ``None`` once they underflow a double; the log columns stay exact."""

    k: int
    omega_k: float | None
    v_k: float | None
    m_k: float
    m_k_scaled: float
    log_omega_k: float
    log_v_k: float


def _unless_underflow(value: float) -> float | None:
    # both quantities are strictly positive, so 0.0 only ever means underflow
    return value if value > 0.0 else None


def mk_sequence(k_max: int) -> list[BMVolumeRow]:
    """One row per ``k = 1..k_max``; ``m_k * sqrt(k)`` tends to ``sqrt(2 pi)``."""
    ratios = mk_values(k_max)
    rows = [
        BMVolumeRow(
            k=k,
            omega_k=_unless_underflow(omega(k)),
            v_k=_unless_underflow(bm_intrinsic_volume(k)),
            m_k=float(m_k),
            m_k_scaled=float(m_k) * math.sqrt(k),
            log_omega_k=log_omega(k),
            log_v_k=log_bm_intrinsic_volume(k),
        )
        for k, m_k in enumerate(ratios, start=1)
    ]
    logger.debug(f"Built {len(rows)} Brownian motion body rows")
    return rows


def is_strictly_decreasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) < 0))


def discretized_bm_volume(n: int, k: int) -> float:
    """
    ``V_k`` of ``conv{0, B(1/n), ..., B(1)}``, i.e. ``n^(-k/2) V_k(K)``.

    Tends to :func:`bm_intrinsic_volume` as ``n`` grows.
    """
    scaled = limit_row(n, k)
    if k > LOG_SPACE_THRESHOLD:
        return math.exp(math.log(scaled) - math.lgamma(k + 1))
    return scaled / math.factorial(k)


@dataclass(frozen=True)
class LimitRow:
    """One dimension of the Riemann-sum convergence ``n^(-k/2) S_k(n) -> omega_k``."""

    n: int
    k: int
    scaled_sum: float
    omega_k: float

    @property
    def ratio(self) -> float:
        return self.scaled_sum / self.omega_k

    @property
    def relative_error(self) -> float:
        return abs(self.ratio - 1.0)


def limit_rows(k: int, ns: list[int]) -> list[LimitRow]:
    k = _validate_k(k, 1)
    target = omega(k)
    return [LimitRow(n=n, k=k, scaled_sum=limit_row(n, k), omega_k=target) for n in ns]
