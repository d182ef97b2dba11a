"""
Root-location check for the polynomial ``f(x) = sum_i omega_i V_{n-i}(K) (-x)^i``.

The conjecture being tested says the real parts ``a_1 <= ... <= a_n`` of the roots of
``f`` bracket the radii: ``0 < a_1 <= r <= R <= a_n``.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P

from orthoscheme.exceptions import InvalidPolynomial, RootPrecisionFailure
from orthoscheme.geometry.brownian import omega
from orthoscheme.geometry.exact import Method, intrinsic_volumes_all
from orthoscheme.geometry.orthoscheme import circumradius, inradius, validate_dimension

logger = logging.getLogger(__name__)

DEFAULT_RESIDUAL_TOLERANCE = 1e-10
DEFAULT_IMAG_THRESHOLD = 1e-8
DEFAULT_SLACK = 1e-9
DEFAULT_MPMATH_DPS = 60
NEWTON_STEPS = 3


def sy_coefficients(n: int) -> list[float]:
    """Unsigned coefficients ``c_i = omega_i V_{n-i}(K)``, ``i = 0..n``."""
    n = validate_dimension(n)
    volumes = intrinsic_volumes_all(n, Method.DP)
    return [omega(i) * volumes[n - i] for i in range(n + 1)]


def sy_polynomial(n: int) -> list[float]:
    """Monomial coefficients of ``f``, ascending: the ``x^i`` coefficient is ``(-1)^i c_i``."""
    return [(-1) ** i * c for i, c in enumerate(sy_coefficients(n))]


def _validate_coefficients(coefficients: Sequence[float]) -> np.ndarray:
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise InvalidPolynomial(f"Need a polynomial of degree >= 1, got {c.size} coefficients")
    if not np.all(np.isfinite(c)):
        raise InvalidPolynomial("Coefficients must be finite")
    if not np.any(c):
        raise InvalidPolynomial("The zero polynomial has no well-defined roots")
    if c[-1] == 0:
        raise InvalidPolynomial("Leading coefficient must be nonzero")
    return c


def relative_residual(coefficients: Sequence[float], z: complex) -> float:
    """``|f(z)| / sum_i |c_i| |z|^i``, the backward error of ``z`` as a root."""
    c = np.asarray(coefficients, dtype=float)
    scale = float(P.polyval(abs(z), np.abs(c)))
    if scale == 0:
        return 0.0
    return abs(complex(P.polyval(z, c))) / scale


def _newton_polish(c: np.ndarray, roots: np.ndarray) -> np.ndarray:
    derivative = P.polyder(c)
    polished = roots.astype(complex)
    for i, z in enumerate(polished):
        best, best_residual = z, relative_residual(c, z)
        for _ in range(NEWTON_STEPS):
            slope = complex(P.polyval(best, derivative))
            if slope == 0:
                break
            candidate = best - complex(P.polyval(best, c)) / slope
            residual = relative_residual(c, candidate)
            if residual >= best_residual:
                break
            best, best_residual = candidate, residual
        polished[i] = best
    return polished


def _double_roots(c: np.ndarray) -> np.ndarray:
    """Companion eigenvalues after scaling ``x = sigma y`` so the end coefficients match."""
    degree = c.size - 1
    sigma = abs(c[0] / c[-1]) ** (1.0 / degree)
    scaled = c * sigma ** np.arange(degree + 1)
    scaled /= np.max(np.abs(scaled))
    return sigma * P.polyroots(scaled)


def _mpmath_roots(c: np.ndarray, dps: int) -> np.ndarray:
    with mpmath.workdps(dps):
        descending = [mpmath.mpf(float(x)) for x in c[::-1]]
        try:
            found = mpmath.polyroots(descending, maxsteps=200, extraprec=2 * dps)
        except mpmath.libmp.NoConvergence as e:
            raise RootPrecisionFailure(f"Extended-precision root finder did not converge at {dps} digits") from e
        return np.array([complex(z) for z in found])


def _worst_residual(c: np.ndarray, roots: np.ndarray) -> float:
    return max((relative_residual(c, z) for z in roots), default=0.0)


def _sorted(roots: np.ndarray) -> list[complex]:
    return sorted((complex(z) for z in roots), key=lambda z: (z.real, z.imag))


def poly_roots(
    coefficients: Sequence[float],
    *,
    tolerance: float = DEFAULT_RESIDUAL_TOLERANCE,
    dps: int = DEFAULT_MPMATH_DPS,
    high_precision: bool = False,
) -> list[complex]:
    """
    All complex roots of ``sum_i c_i x^i`` (ascending coefficients), sorted by real part.

    Every root meets ``|f(z)| <= tolerance * sum_i |c_i| |z|^i``. Double precision is tried
    first; otherwise, or when ``high_precision`` is set, the roots come from mpmath.
    """
    c = _validate_coefficients(coefficients)
    # x = 0 roots split off exactly
    zeros = int(np.argmax(c != 0))
    reduced = c[zeros:]
    if reduced.size == 1:
        return [0j] * zeros

    if not high_precision:
        roots = _newton_polish(reduced, _double_roots(reduced))
        worst = _worst_residual(reduced, roots)
        if worst <= tolerance:
            return _sorted(np.concatenate([np.zeros(zeros, dtype=complex), roots]))
        logger.warning(f"Double-precision roots reach residual {worst:.3g} > {tolerance:.3g}; escalating to mpmath")

    roots = _newton_polish(reduced, _mpmath_roots(reduced, dps))
    worst = _worst_residual(reduced, roots)
    if worst > tolerance:
        raise RootPrecisionFailure(f"Root residual {worst:.3g} exceeds {tolerance:.3g} after precision escalation")
    return _sorted(np.concatenate([np.zeros(zeros, dtype=complex), roots]))


def max_imag_relative(roots: Sequence[complex]) -> float:
    """``max |Im z| / max(1, max |Re z|)``."""
    if not roots:
        return 0.0
    largest_real = max(abs(z.real) for z in roots)
    return max(abs(z.imag) for z in roots) / max(1.0, largest_real)


@dataclass(frozen=True)
class SYReport:
    """Outcome of the root-location check for one dimension."""

    n: int
    coefficients: tuple[float, ...]
    roots: tuple[complex, ...]
    max_imag_rel: float
    max_residual: float
    inradius: float
    circumradius: float
    pass_bracket: bool
    pass_real: bool

    @property
    def monomial_coefficients(self) -> tuple[float, ...]:
        return tuple((-1) ** i * c for i, c in enumerate(self.coefficients))

    @property
    def real_parts(self) -> tuple[float, ...]:
        return tuple(z.real for z in self.roots)

    @property
    def a_1(self) -> float:
        return self.roots[0].real

    @property
    def a_n(self) -> float:
        return self.roots[-1].real

    @property
    def passed(self) -> bool:
        return self.pass_bracket and self.pass_real


def sy_check(
    n: int,
    imag_threshold: float = DEFAULT_IMAG_THRESHOLD,
    slack: float = DEFAULT_SLACK,
    *,
    tolerance: float = DEFAULT_RESIDUAL_TOLERANCE,
    dps: int = DEFAULT_MPMATH_DPS,
    radii: tuple[float, float] | None = None,
) -> SYReport:
    """
    Check ``0 < a_1 <= r <= R <= a_n`` (up to ``slack``) and that the roots are real.

    Roots whose imaginary parts exceed ``imag_threshold`` are recomputed in extended
    precision before the realness verdict is taken. ``radii`` is ``(r, R)`` when the
    caller already has them.
    """
    n = validate_dimension(n)
    coefficients = sy_coefficients(n)
    polynomial = [(-1) ** i * c for i, c in enumerate(coefficients)]
    roots = poly_roots(polynomial, tolerance=tolerance, dps=dps)
    imag_rel = max_imag_relative(roots)
    if imag_rel > imag_threshold:
        logger.warning(f"n={n}: roots look complex (relative imaginary part {imag_rel:.3g}); recomputing with mpmath")
        roots = poly_roots(polynomial, tolerance=tolerance, dps=dps, high_precision=True)
        imag_rel = max_imag_relative(roots)

    r, big_r = radii if radii is not None else (inradius(n), circumradius(n))
    a_1, a_n = roots[0].real, roots[-1].real
    pass_bracket = a_1 > -slack and a_1 <= r + slack and big_r <= a_n + slack
    pass_real = imag_rel <= imag_threshold
    residual = _worst_residual(np.asarray(polynomial), np.asarray(roots))

    logger.info(
        f"n={n}: a_1={a_1:.6g} r={r:.6g} R={big_r:.6g} a_n={a_n:.6g} "
        f"bracket={'pass' if pass_bracket else 'FAIL'} real={'pass' if pass_real else 'FAIL'}"
    )
    return SYReport(
        n=n,
        coefficients=tuple(coefficients),
        roots=tuple(roots),
        max_imag_rel=imag_rel,
        max_residual=residual,
        inradius=r,
        circumradius=big_r,
        pass_bracket=pass_bracket,
        pass_real=pass_real,
    )


def vieta_sum_error(report: SYReport) -> float:
    """Relative gap between the sum of the roots and ``-c'_{n-1} / c'_n`` for the monomial coefficients."""
    c = report.monomial_coefficients
    expected = -c[-2] / c[-1]
    actual = math.fsum(z.real for z in report.roots)
    return abs(actual - expected) / max(abs(expected), 1e-300)
