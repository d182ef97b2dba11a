"""
Normal cones of the orthoscheme and the simplicial cones built from their rays.

The outward facet normals are

* ``u_0 = e_1``,
* ``u_i = (-e_i + e_{i+1}) / sqrt(2)`` for ``1 <= i <= n - 1``,
* ``u_n = -e_n``,

and ``u_i`` is the normal of the facet opposite ``P_i``. The normal cone of ``F_J`` is
spanned by ``u_i`` for ``i`` not in ``J``.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from orthoscheme.exceptions import DegenerateCone, InvalidDimension, MissingFace, NotSimplicial
from orthoscheme.geometry.orthoscheme import FaceIndex, enumerate_faces, face_volume, validate_dimension

logger = logging.getLogger(__name__)

SQRT_HALF = math.sqrt(0.5)
DEGENERATE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """
    Simplicial cone ``{sum c_i r_i : c_i >= 0}`` given by unit rays in ``R^p``.

    ``rays`` is a read-only ``(m, p)`` array; ``m = 0`` is the cone ``{0}``.
    """

    rays: np.ndarray
    ambient_dim: int
    label: str = ""

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[float]] | np.ndarray, ambient_dim: int, label: str = "") -> "ConeSpec":
        matrix = np.asarray(rays, dtype=float)
        matrix = np.zeros((0, ambient_dim)) if matrix.size == 0 else matrix.reshape(-1, ambient_dim)
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(norms == 0):
            raise NotSimplicial(f"Cone '{label}' has a zero ray")
        matrix = matrix / norms[:, None]
        matrix.flags.writeable = False
        return cls(rays=matrix, ambient_dim=ambient_dim, label=label)

    @property
    def ray_count(self) -> int:
        return self.rays.shape[0]

    @property
    def span_dim(self) -> int:
        if self.ray_count == 0:
            return 0
        return int(np.linalg.matrix_rank(self.rays))

    @property
    def is_simplicial(self) -> bool:
        return self.span_dim == self.ray_count

    def require_simplicial(self) -> "ConeSpec":
        if not self.is_simplicial:
            raise NotSimplicial(f"Cone '{self.label}' has {self.ray_count} rays spanning only {self.span_dim} dimensions")
        return self

    def span_basis(self) -> np.ndarray:
        """Orthonormal basis of the linear span as a ``(p, m)`` matrix."""
        q, _ = np.linalg.qr(self.rays.T)
        return q

    def rays_in_span(self) -> np.ndarray:
        """Rays expressed in :meth:`span_basis` coordinates, one ray per column."""
        return self.span_basis().T @ self.rays.T


def ray_matrix(n: int) -> np.ndarray:
    """All ``n + 1`` facet normals ``u_0, ..., u_n`` as rows."""
    n = validate_dimension(n)
    rays = np.zeros((n + 1, n))
    rays[0, 0] = 1.0
    for i in range(1, n):
        rays[i, i - 1] = -SQRT_HALF
        rays[i, i] = SQRT_HALF
    rays[n, n - 1] = -1.0
    return rays


def normal_cone_rays(n: int, face: FaceIndex) -> ConeSpec:
    """Rays ``u_i, i not in J`` spanning ``N(F_J, K)``; there are ``n - k`` of them."""
    n = validate_dimension(n)
    face.validate_for(n)
    keep = [i for i in range(n + 1) if i not in face.indices]
    return ConeSpec.from_rays(ray_matrix(n)[keep], ambient_dim=n, label=f"N(F_{face})")


def argmax_face_of(n: int, v: Sequence[float] | np.ndarray, tie_eps: float = 0.0) -> FaceIndex:
    """
    Face on which ``<v, .>`` is maximised over the orthoscheme.

    ``<v, P_i>`` is the prefix sum ``s_i`` (``s_0 = 0``); the face collects every index whose
    prefix sum is within ``tie_eps`` of the maximum.
    """
    n = validate_dimension(n)
    vector = np.asarray(v, dtype=float)
    if vector.shape != (n,):
        raise InvalidDimension(f"Expected a vector of length {n}, got shape {vector.shape}")
    prefix = np.concatenate(([0.0], np.cumsum(vector)))
    winners = np.flatnonzero(prefix >= prefix.max() - tie_eps)
    return FaceIndex(tuple(int(i) for i in winners))


def e_cone_rays(n: int, d: int, i0: int) -> ConeSpec:
    """
    The cone ``E_{i0}^d`` left after deleting the middle blocks of a face with span ``d``.

    Keeps ``u_i`` for ``i < i0`` and ``i > i0 + d`` restricted to the live coordinates
    ``{1..i0} U {i0+d+1..n}``: a full-dimensional simplicial cone in ``R^(n-d)``.
    ``d = 0`` gives the normal cone of the vertex ``P_{i0}``.
    """
    n = validate_dimension(n)
    if not 0 <= d <= n:
        raise InvalidDimension(f"Span d must lie in [0, {n}], got {d}")
    if not 0 <= i0 <= n - d:
        raise InvalidDimension(f"i0 must lie in [0, {n - d}] for n={n}, d={d}, got {i0}")
    keep = [i for i in range(n + 1) if i < i0 or i > i0 + d]
    live = [*range(i0), *range(i0 + d, n)]
    rays = ray_matrix(n)[np.ix_(keep, live)]
    return ConeSpec.from_rays(rays, ambient_dim=n - d, label=f"E_{i0}^{d} (n={n})")


def block_cone_rays(d: int, l: int) -> ConeSpec:  # noqa: E741
    """
    The block cone ``B^l`` in ``R^d``, lying in the hyperplane ``sum(x) = 0``.

    Uses the cyclic system ``v_j = (-e_j + e_{j+1}) / sqrt(2)`` for ``j < d`` and
    ``v_d = (e_1 - e_d) / sqrt(2)``. ``l = 0`` is ``{v_1, ..., v_{d-1}}``; for ``l >= 1``
    ``v_l`` is replaced by ``v_d`` and the rows rotated so ``v_{l+1}`` comes first.
    """
    if d < 2:
        raise InvalidDimension(f"Block size must be >= 2, got {d}")
    if not 0 <= l <= d - 1:
        raise InvalidDimension(f"Block cone index must lie in [0, {d - 1}], got {l}")
    cyclic = np.zeros((d, d))
    for j in range(d - 1):
        cyclic[j, j] = -SQRT_HALF
        cyclic[j, j + 1] = SQRT_HALF
    cyclic[d - 1, 0] = SQRT_HALF
    cyclic[d - 1, d - 1] = -SQRT_HALF

    # 0-based rows: v_1..v_{d-1} are 0..d-2, v_d is d-1
    order = list(range(d - 1)) if l == 0 else [*range(l, d), *range(l - 1)]
    return ConeSpec.from_rays(cyclic[order], ambient_dim=d, label=f"B^{l} (d={d})")


def euler_solid_angle(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> float:
    """
    Spherical area ``Gamma`` of the cone spanned by unit vectors ``a, b, c`` in ``R^3``.

    ``tan(Gamma / 2) = |a . (b x c)| / (1 + b.c + c.a + a.b)``; ``atan2`` keeps the
    reflex case (non-positive denominator) in ``[pi, 2 pi)``.
    """
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    numerator = abs(float(np.dot(a, np.cross(b, c))))
    denominator = 1.0 + float(np.dot(b, c) + np.dot(c, a) + np.dot(a, b))
    if numerator < DEGENERATE_EPS and abs(denominator) < DEGENERATE_EPS:
        raise DegenerateCone("Solid angle is undefined: triple product and denominator both vanish")
    return 2.0 * math.atan2(numerator, denominator)


def exact_cone_measure(cone: ConeSpec) -> float:
    """
    Gaussian measure of a simplicial cone within its span, for up to three rays.

    Half-line: 1/2; planar wedge: angle / (2 pi); three rays: Euler's solid angle / (4 pi).
    """
    cone.require_simplicial()
    m = cone.ray_count
    if m == 0:
        return 1.0
    if m == 1:
        return 0.5
    if m > 3:
        raise InvalidDimension(f"No closed form for cones with {m} rays")

    local = cone.rays_in_span().T
    local = local / np.linalg.norm(local, axis=1)[:, None]
    if m == 2:
        first, second = local
        angle = math.atan2(abs(first[0] * second[1] - first[1] * second[0]), float(np.dot(first, second)))
        return angle / (2 * math.pi)
    return euler_solid_angle(*local) / (4 * math.pi)


def solid_angle_gammas(n: int) -> dict[FaceIndex, float]:
    """Exact ``gamma_J`` for every face whose normal cone has at most three rays (``k >= n - 3``)."""
    n = validate_dimension(n)
    return {
        face: exact_cone_measure(normal_cone_rays(n, face))
        for k in range(max(0, n - 3), n + 1)
        for face in enumerate_faces(n, k)
    }


def mcmullen_assemble(n: int, k: int, gammas: Mapping[FaceIndex, float]) -> float:
    """``V_k = sum_J A_J * gamma_J`` over the k-faces."""
    total = []
    for face in enumerate_faces(n, k):
        if face not in gammas:
            raise MissingFace(f"No gamma value for face {face}")
        total.append(face_volume(n, face) * float(gammas[face]))
    return math.fsum(total)


def grouped_gamma_sums(n: int, k: int, gammas: Mapping[FaceIndex, float]) -> dict[tuple[int, ...], float]:
    """
    Sum ``gamma_J * prod(gaps)`` over the translates of each gap composition.

    Every group sums to 1 because the corresponding E-cones partition ``R^(n-d)``.
    """
    groups: dict[tuple[int, ...], list[float]] = defaultdict(list)
    for face in enumerate_faces(n, k):
        if face not in gammas:
            raise MissingFace(f"No gamma value for face {face}")
        groups[face.gaps].append(float(gammas[face]) * face.gap_product)
    return {gaps: math.fsum(values) for gaps, values in sorted(groups.items())}
