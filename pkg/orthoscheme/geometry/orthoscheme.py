"""
The orthoscheme ``K = conv{P_0, ..., P_n}`` with ``P_i = (1, ..., 1, 0, ..., 0)`` (i leading ones).

Equivalently ``K = {x : 1 >= x_1 >= ... >= x_n >= 0}``. Everything in this module
is a pure function of ``n`` and safe to share between threads.
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from orthoscheme.exceptions import InvalidDimension, InvalidFaceIndex, NumericalError

logger = logging.getLogger(__name__)

# Relative agreement required between the two inradius computations.
INRADIUS_AGREEMENT = 1e-10
# Constraints with a smaller slack are treated as active when polishing the LP optimum.
ACTIVE_SLACK = 1e-7


def validate_dimension(n: int) -> int:
    """Reject anything that is not a positive integer dimension."""
    if isinstance(n, bool) or not isinstance(n, int | np.integer):
        raise InvalidDimension(f"Dimension must be an integer, got {type(n).__name__}")
    if n < 1:
        raise InvalidDimension(f"Dimension must be >= 1, got {n}")
    return int(n)


@dataclass(frozen=True, order=True)
class FaceIndex:
    """
    Strictly increasing vertex index set ``J = {i_0 < ... < i_k}`` naming the k-face ``F_J``.

    Ordering is lexicographic on the index tuple, which is the order
    :func:`enumerate_faces` yields.
    """

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.indices:
            raise InvalidFaceIndex("A face needs at least one vertex index")
        if any(i < 0 for i in self.indices):
            raise InvalidFaceIndex(f"Face indices must be nonnegative: {self.indices}")
        if any(b <= a for a, b in itertools.pairwise(self.indices)):
            raise InvalidFaceIndex(f"Face indices must be strictly increasing: {self.indices}")

    @classmethod
    def of(cls, *indices: int) -> "FaceIndex":
        return cls(tuple(int(i) for i in indices))

    @classmethod
    def parse(cls, text: str) -> "FaceIndex":
        """Parse the comma-joined form used in reports, e.g. ``"0,2,4"``."""
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError as e:
            raise InvalidFaceIndex(f"Cannot parse face index '{text}': {e}") from e

    @property
    def k(self) -> int:
        """Face dimension."""
        return len(self.indices) - 1

    @property
    def gaps(self) -> tuple[int, ...]:
        """Gap composition ``(l_1, ..., l_k)`` with ``l_j = i_j - i_{j-1}``."""
        return tuple(b - a for a, b in itertools.pairwise(self.indices))

    @property
    def first(self) -> int:
        return self.indices[0]

    @property
    def last(self) -> int:
        return self.indices[-1]

    @property
    def span(self) -> int:
        """``d = i_k - i_0``, the sum of the gaps."""
        return self.last - self.first

    @property
    def gap_product(self) -> int:
        return math.prod(self.gaps)

    def validate_for(self, n: int) -> "FaceIndex":
        if self.last > n:
            raise InvalidFaceIndex(f"Face {self} is not a face of the {n}-dimensional orthoscheme")
        return self

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.indices)


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``{x : <normal, x> <= offset}``."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self) -> None:
        if not any(self.normal):
            raise NumericalError("Halfspace normal must be nonzero")

    def slack(self, point: Sequence[float]) -> float:
        """``offset - <normal, point>``; nonnegative iff the point lies in the halfspace."""
        return self.offset - float(np.dot(self.normal, point))


@dataclass(frozen=True)
class Orthoscheme:
    """Convenience wrapper bundling the module functions for one dimension."""

    n: int

    def __post_init__(self) -> None:
        validate_dimension(self.n)

    @cached_property
    def vertices(self) -> np.ndarray:
        return vertices(self.n)

    @cached_property
    def halfspaces(self) -> list[Halfspace]:
        return facet_halfspaces(self.n)

    def faces(self, k: int) -> Iterator[FaceIndex]:
        return enumerate_faces(self.n, k)

    def face_volume(self, face: FaceIndex) -> float:
        return face_volume(self.n, face)

    @property
    def volume(self) -> float:
        return 1.0 / math.factorial(self.n)

    @cached_property
    def inradius(self) -> float:
        return inradius(self.n)

    @cached_property
    def circumradius(self) -> float:
        return circumradius(self.n)


def vertices(n: int) -> np.ndarray:
    """
    Return the ``(n + 1, n)`` array whose row ``i`` is ``P_i``.

    ``<v, P_i>`` is the i-th prefix sum of ``v``, which the samplers rely on.
    """
    n = validate_dimension(n)
    return np.tril(np.ones((n + 1, n)), k=-1)


def face_volume(n: int, face: FaceIndex) -> float:
    """k-volume of ``F_J``: ``sqrt(l_1 * ... * l_k) / k!`` (1 for a vertex)."""
    n = validate_dimension(n)
    face.validate_for(n)
    return math.sqrt(face.gap_product) / math.factorial(face.k)


def enumerate_faces(n: int, k: int) -> Iterator[FaceIndex]:
    """Yield all ``C(n+1, k+1)`` k-faces in lexicographic order of their index sets."""
    n = validate_dimension(n)
    if not 0 <= k <= n:
        raise InvalidDimension(f"Face dimension must lie in [0, {n}], got {k}")
    for indices in itertools.combinations(range(n + 1), k + 1):
        yield FaceIndex(indices)


def all_faces(n: int) -> list[FaceIndex]:
    """Every face of every dimension, grouped by dimension then lexicographic."""
    return [face for k in range(n + 1) for face in enumerate_faces(n, k)]


def facet_halfspaces(n: int) -> list[Halfspace]:
    """
    H-description of the orthoscheme: ``x_1 <= 1``, ``x_{i+1} - x_i <= 0``, ``-x_n <= 0``.

    The j-th halfspace is tight on every vertex except ``P_j``.
    """
    n = validate_dimension(n)
    normals = np.zeros((n + 1, n))
    offsets = np.zeros(n + 1)
    normals[0, 0] = 1.0
    offsets[0] = 1.0
    for i in range(1, n):
        normals[i, i - 1] = -1.0
        normals[i, i] = 1.0
    normals[n, n - 1] = -1.0
    return [
        Halfspace(normal=tuple(float(x) for x in row), offset=float(b))
        for row, b in zip(normals, offsets, strict=True)
    ]


def enumerate_vertices(halfspaces: Sequence[Halfspace], tol: float = 1e-12) -> np.ndarray:
    """
    Recover the vertices of a bounded H-polytope by solving every n-subset of its constraints.

    Only meant for small n (it visits ``C(m, n)`` subsets); rows are returned sorted.
    """
    normals = np.array([h.normal for h in halfspaces], dtype=float)
    offsets = np.array([h.offset for h in halfspaces], dtype=float)
    m, n = normals.shape
    found: list[np.ndarray] = []
    for rows in itertools.combinations(range(m), n):
        system = normals[list(rows)]
        if abs(np.linalg.det(system)) < tol:
            continue
        point = np.linalg.solve(system, offsets[list(rows)])
        if np.all(normals @ point <= offsets + tol) and not any(np.allclose(point, p) for p in found):
            found.append(point)
    logger.debug(f"Vertex enumeration over {m} halfspaces in R^{n} found {len(found)} vertices")
    return np.array(sorted(found, key=tuple))


def circumradius(n: int) -> float:
    """
    Radius of the sphere through all vertices.

    Solves ``<c, P_i> = |P_i|^2 / 2`` for ``i = 1..n`` (``P_0`` is the origin) and
    cross-checks the centre against ``(1/2, ..., 1/2)``.
    """
    n = validate_dimension(n)
    points = vertices(n)[1:]
    rhs = 0.5 * np.einsum("ij,ij->i", points, points)
    try:
        centre = np.linalg.solve(points, rhs)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Equidistance system is singular for n={n}: {e}") from e

    radius = float(np.linalg.norm(centre))
    expected = math.sqrt(n) / 2
    if not math.isclose(radius, expected, rel_tol=1e-12):
        raise NumericalError(f"Circumradius {radius} disagrees with sqrt(n)/2 = {expected} for n={n}")
    return radius


def inradius(n: int) -> float:
    """
    Chebyshev radius ``max{rho : <a_j, x> + rho * |a_j| <= b_j}`` over the facet halfspaces.

    The LP optimum is polished by re-solving its active constraints exactly and must
    agree with :func:`inradius_from_volumes`.
    """
    n = validate_dimension(n)
    halfspaces = facet_halfspaces(n)
    normals = np.array([h.normal for h in halfspaces])
    offsets = np.array([h.offset for h in halfspaces])
    norms = np.linalg.norm(normals, axis=1)

    a_ub = np.hstack([normals, norms[:, None]])
    objective = np.zeros(n + 1)
    objective[-1] = -1.0
    bounds = [(None, None)] * n + [(0, None)]
    result = linprog(objective, A_ub=a_ub, b_ub=offsets, bounds=bounds, method="highs")
    if result.status != 0:
        raise NumericalError(f"Chebyshev LP failed for n={n}: {result.message}")

    solution = _polish_active_set(a_ub, offsets, result.x)
    radius = float(solution[-1])

    reference = inradius_from_volumes(n)
    if not math.isclose(radius, reference, rel_tol=INRADIUS_AGREEMENT):
        raise NumericalError(f"LP inradius {radius} disagrees with volume identity {reference} for n={n}")
    return radius


def _polish_active_set(a_ub: np.ndarray, b_ub: np.ndarray, x: np.ndarray) -> np.ndarray:
    slack = b_ub - a_ub @ x
    active = slack < ACTIVE_SLACK * max(1.0, float(np.max(np.abs(b_ub))))
    if active.sum() < a_ub.shape[1]:
        logger.debug("Chebyshev LP optimum is not a vertex; keeping solver output")
        return x
    polished, *_ = np.linalg.lstsq(a_ub[active], b_ub[active], rcond=None)
    return polished


def inradius_from_volumes(n: int) -> float:
    """Simplex identity ``r = n * Vol_n / (sum of facet volumes)``."""
    n = validate_dimension(n)
    facet_area = math.fsum(face_volume(n, face) for face in enumerate_faces(n, n - 1))
    return n * (1.0 / math.factorial(n)) / facet_area
