"""
Exact intrinsic volumes of the orthoscheme from the composition sum.

``V_k = S_k(n) / k!`` with ``S_k(n) = sum prod(l_i)^(-1/2)`` over integer compositions
``(l_1, ..., l_k)``, ``l_i >= 1``, ``sum(l_i) <= n``.
"""

import itertools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from orthoscheme.exceptions import BudgetExceeded, InvalidDimension, NumericalError
from orthoscheme.geometry.orthoscheme import validate_dimension

logger = logging.getLogger(__name__)

DEFAULT_TERM_BUDGET = 10**8
# math.factorial(k) still converts to a finite double up to here.
MAX_FLOAT_FACTORIAL = 170
# V_n is the volume 1/n!; exact and sampled vectors both hit it to rounding.
TOP_VOLUME_RTOL = 1e-9


class Method(StrEnum):
    ENUM = "enum"
    DP = "dp"


class Provenance(StrEnum):
    EXACT_ENUM = "exact-enum"
    EXACT_DP = "exact-dp"
    MC_ESTIMATE = "mc-estimate"

    @classmethod
    def for_method(cls, method: Method) -> "Provenance":
        return cls.EXACT_ENUM if Method(method) is Method.ENUM else cls.EXACT_DP


@dataclass(frozen=True)
class IntrinsicVolumes:
    """The vector ``(V_0, ..., V_n)`` together with where it came from."""

    n: int
    values: tuple[float, ...]
    method: Provenance
    stderr: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.values) != self.n + 1:
            raise InvalidDimension(f"Expected {self.n + 1} intrinsic volumes, got {len(self.values)}")
        if self.stderr is not None and len(self.stderr) != len(self.values):
            raise InvalidDimension("Standard errors must match the intrinsic volumes in length")
        if self.values[0] != 1.0:
            raise NumericalError(f"V_0 must be 1, got {self.values[0]}")
        if not all(math.isfinite(v) and v >= 0.0 for v in self.values):
            raise NumericalError(f"Intrinsic volumes must be finite and non-negative, got {self.values}")
        top = math.exp(-math.lgamma(self.n + 1))
        if not math.isclose(self.values[-1], top, rel_tol=TOP_VOLUME_RTOL, abs_tol=1e-300):
            raise NumericalError(f"V_{self.n} must equal 1/{self.n}!, got {self.values[-1]}")

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CompositionSumTable:
    """
    Full dynamic-programming table ``T_j(m)`` for ``1 <= j <= k``, ``0 <= m <= n``.

    ``rows[j - 1][m]`` holds ``T_j(m)``; entries with ``m < j`` are zero.
    """

    n: int
    k: int
    rows: tuple[np.ndarray, ...]

    def value(self, j: int, m: int) -> float:
        return float(self.rows[j - 1][m])

    def total(self, j: int | None = None) -> float:
        """``S_j(n) = sum_{m=j}^{n} T_j(m)``; defaults to ``j = k``."""
        j = self.k if j is None else j
        return math.fsum(self.rows[j - 1][j:])


def _validate_range(n: int, k: int) -> tuple[int, int]:
    n = validate_dimension(n)
    if not 1 <= k <= n:
        raise InvalidDimension(f"Composition length must lie in [1, {n}], got {k}")
    return n, int(k)


def iter_compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """
    Yield every composition ``(l_1, ..., l_k)`` with positive parts and total ``<= n``.

    Compositions correspond to their partial sums, a k-subset of ``{1..n}``; there are ``C(n, k)``.
    """
    n, k = _validate_range(n, k)
    for cuts in itertools.combinations(range(1, n + 1), k):
        yield tuple(b - a for a, b in itertools.pairwise((0, *cuts)))


def composition_sum_enumerate(n: int, k: int, *, term_budget: int = DEFAULT_TERM_BUDGET) -> float:
    """``S_k(n)`` by explicit enumeration with compensated summation (the oracle)."""
    n, k = _validate_range(n, k)
    expected_terms = math.comb(n, k)
    if expected_terms > term_budget:
        raise BudgetExceeded(
            f"Enumerating S_{k}({n}) needs {expected_terms} terms, above the budget of {term_budget}"
        )

    visited = 0

    def terms() -> Iterator[float]:
        nonlocal visited
        for composition in iter_compositions(n, k):
            visited += 1
            yield 1.0 / math.sqrt(math.prod(composition))

    total = math.fsum(terms())
    if visited != expected_terms:
        raise NumericalError(f"Enumeration visited {visited} compositions, expected C({n},{k}) = {expected_terms}")
    logger.debug(f"Enumerated S_{k}({n}) over {visited} compositions")
    return total


def _weights(n: int) -> np.ndarray:
    weights = np.zeros(n + 1)
    weights[1:] = 1.0 / np.sqrt(np.arange(1, n + 1, dtype=float))
    return weights


def _dp_rows(n: int, k_max: int) -> Iterator[np.ndarray]:
    """Yield ``T_1, ..., T_{k_max}`` keeping only the previous row alive."""
    weights = _weights(n)
    row = weights.copy()
    yield row
    for _ in range(2, k_max + 1):
        # T_j(m) = sum_{l >= 1} T_{j-1}(m - l) * l^(-1/2)
        row = np.convolve(row, weights)[: n + 1]
        yield row


def composition_sum_table(n: int, k: int) -> CompositionSumTable:
    """Materialise the whole table, for inspection and tests."""
    n, k = _validate_range(n, k)
    rows = tuple(row.copy() for row in _dp_rows(n, k))
    for row in rows:
        row.flags.writeable = False
    return CompositionSumTable(n=n, k=k, rows=rows)


def composition_sums_dp(n: int, k_max: int) -> list[float]:
    """``[S_1(n), ..., S_{k_max}(n)]`` from a single pass of the convolution recurrence."""
    n, k_max = _validate_range(n, k_max)
    sums = [math.fsum(row[j:]) for j, row in enumerate(_dp_rows(n, k_max), start=1)]
    logger.debug(f"Dynamic program for n={n} produced {len(sums)} composition sums")
    return sums


def composition_sum_dp(n: int, k: int) -> float:
    """``S_k(n)`` in ``O(k n^2)`` time via the convolution recurrence."""
    return composition_sums_dp(n, k)[-1]


def _over_factorial(value: float, k: int) -> float:
    if k <= MAX_FLOAT_FACTORIAL:
        return value / math.factorial(k)
    return math.exp(math.log(value) - math.lgamma(k + 1))


def intrinsic_volume(
    n: int,
    k: int,
    method: Method | str = Method.DP,
    *,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> float:
    """``V_k`` of the n-dimensional orthoscheme; ``V_0 = 1``."""
    n = validate_dimension(n)
    if not 0 <= k <= n:
        raise InvalidDimension(f"k must lie in [0, {n}], got {k}")
    if k == 0:
        return 1.0
    if Method(method) is Method.ENUM:
        total = composition_sum_enumerate(n, k, term_budget=term_budget)
    else:
        total = composition_sum_dp(n, k)
    return _over_factorial(total, k)


def intrinsic_volumes_all(
    n: int,
    method: Method | str = Method.DP,
    *,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> IntrinsicVolumes:
    """
    All of ``V_0, ..., V_n``; the dp method shares one sweep of the table across k.

    The enum method visits ``sum_k C(n, k) = 2^n - 1`` compositions in total; ``term_budget``
    bounds that total and is checked before anything is enumerated.
    """
    n = validate_dimension(n)
    method = Method(method)
    if method is Method.ENUM:
        total_terms = 2**n - 1
        if total_terms > term_budget:
            raise BudgetExceeded(
                f"Enumerating S_1({n}) .. S_{n}({n}) needs {total_terms} terms, above the budget of {term_budget}"
            )
        sums = [composition_sum_enumerate(n, k, term_budget=term_budget) for k in range(1, n + 1)]
    else:
        sums = composition_sums_dp(n, n)
    values = (1.0, *(_over_factorial(total, k) for k, total in enumerate(sums, start=1)))
    return IntrinsicVolumes(n=n, values=values, method=Provenance.for_method(method))


def limit_row(n: int, k: int) -> float:
    """``n^(-k/2) * S_k(n)``, which tends to ``omega_k`` as ``n`` grows."""
    n, k = _validate_range(n, k)
    return composition_sum_dp(n, k) * n ** (-k / 2)
