"""
Monte Carlo estimation of Gaussian cone measures.

Samples are drawn in fixed-size chunks; chunk ``i`` always uses the substream keyed by
``(seed, i)``, so estimates are bit-identical for any number of worker threads.
"""

import logging
import math
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

from orthoscheme.exceptions import InvalidSamplingPlan
from orthoscheme.geometry.cones import ConeSpec
from orthoscheme.geometry.exact import IntrinsicVolumes, Provenance
from orthoscheme.geometry.orthoscheme import FaceIndex, all_faces, face_volume, validate_dimension

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 65536
# Ray coordinates above this count as inside the cone.
MEMBERSHIP_TOLERANCE = -1e-12

T = TypeVar("T")


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 generator for chunk ``index`` of the run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise InvalidSamplingPlan(f"Thread count must be >= 1, got {threads}")
    return threads


def chunk_plan(samples: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[int]:
    """Sizes of the chunks a run of ``samples`` draws is split into."""
    if samples < 1:
        raise InvalidSamplingPlan(f"Sample count must be >= 1, got {samples}")
    if chunk_size < 1:
        raise InvalidSamplingPlan(f"Chunk size must be >= 1, got {chunk_size}")
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _validate_seed(seed: int) -> int:
    if seed < 0:
        raise InvalidSamplingPlan(f"Seed must be nonnegative, got {seed}")
    return int(seed)


def _map_chunks(work: Callable[[int, int], T], sizes: list[int], threads: int) -> list[T]:
    """Run ``work(index, size)`` for every chunk, returning results in chunk order."""
    indices = range(len(sizes))
    if threads == 1 or len(sizes) == 1:
        return [work(i, size) for i, size in zip(indices, sizes, strict=True)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, indices, sizes))


def _binomial_stderr(p: float, samples: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / samples)


@dataclass(frozen=True)
class GammaEstimate:
    """Frequency estimate of ``gamma_J``, the Gaussian measure of ``N(F_J, K)`` within its span."""

    face: FaceIndex
    gamma_hat: float
    stderr: float
    samples: int
    seed: int

    @classmethod
    def from_count(cls, face: FaceIndex, count: int, samples: int, seed: int) -> "GammaEstimate":
        gamma_hat = count / samples
        return cls(face=face, gamma_hat=gamma_hat, stderr=_binomial_stderr(gamma_hat, samples), samples=samples, seed=seed)


@dataclass(frozen=True)
class ConeEstimate:
    """Gaussian measure of an arbitrary simplicial cone, measured within its span."""

    gamma_hat: float
    stderr: float
    samples: int
    seed: int
    label: str = ""


@dataclass(frozen=True)
class _FaceTally:
    counts: np.ndarray
    sum_x: np.ndarray
    sum_x2: np.ndarray


class _FaceClassifier:
    """
    Decides, for a batch of Gaussian vectors, which normal cones their projections fall into.

    The projection of ``g`` onto ``lin(F_J)^perp`` subtracts the mean of ``g`` over each gap
    block of ``J``. Its prefix sums are ``S - chord_J(S)`` shifted by ``S_{i_0}``, where
    ``chord_J`` interpolates ``S`` linearly between the knots ``J`` and is constant outside
    them. The projection lies in ``N(F_J, K)`` iff ``S_t < chord_J(S)_t`` for every ``t`` not in ``J``.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.faces = all_faces(n)
        self.volumes = np.array([face_volume(n, face) for face in self.faces])
        self.vertex_slots = [i for i, face in enumerate(self.faces) if face.k == 0]
        self.chords = {i: self._chord(face) for i, face in enumerate(self.faces) if 0 < face.k < n}

    def _chord(self, face: FaceIndex) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        weights = np.zeros((n + 1, n + 1))
        for t in range(n + 1):
            if t <= face.first:
                weights[face.first, t] = 1.0
            elif t >= face.last:
                weights[face.last, t] = 1.0
            else:
                right = next(j for j in face.indices if j >= t)
                left = max(j for j in face.indices if j < t)
                share = (t - left) / (right - left)
                weights[left, t] = 1.0 - share
                weights[right, t] = share
        outside = np.array([t for t in range(n + 1) if t not in face.indices])
        return outside, weights[:, outside]

    def tally(self, gaussians: np.ndarray) -> _FaceTally:
        n = self.n
        size = gaussians.shape[0]
        prefix = np.zeros((size, n + 1))
        np.cumsum(gaussians, axis=1, out=prefix[:, 1:])

        counts = np.zeros(len(self.faces), dtype=np.int64)
        per_sample = np.zeros((size, n + 1))

        # vertices: the argmax of the prefix sums picks exactly one per sample
        winners = np.bincount(prefix.argmax(axis=1), minlength=n + 1)
        counts[self.vertex_slots] = winners
        per_sample[:, 0] = 1.0

        for slot, (outside, chord) in self.chords.items():
            inside = np.all(prefix[:, outside] < prefix @ chord, axis=1)
            counts[slot] = int(np.count_nonzero(inside))
            per_sample[:, self.faces[slot].k] += self.volumes[slot] * inside

        # the full face has the cone {0} in R^0, which holds every projection
        counts[-1] = size
        per_sample[:, n] = self.volumes[-1]

        return _FaceTally(
            counts=counts,
            sum_x=per_sample.sum(axis=0),
            sum_x2=np.square(per_sample).sum(axis=0),
        )


@dataclass(frozen=True)
class FaceSample:
    """Pooled result of one face-sampling run, shared by the gamma and intrinsic-volume views."""

    n: int
    samples: int
    seed: int
    faces: tuple[FaceIndex, ...]
    counts: tuple[int, ...]
    sum_x: tuple[float, ...]
    sum_x2: tuple[float, ...]
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def gamma_estimates(self) -> dict[FaceIndex, GammaEstimate]:
        return {
            face: GammaEstimate.from_count(face, count, self.samples, self.seed)
            for face, count in zip(self.faces, self.counts, strict=True)
        }

    def intrinsic_volumes(self) -> IntrinsicVolumes:
        """
        ``V_k`` as the mean of ``X_k = sum_J A_J 1[sample in N(F_J)]``.

        The standard error comes from the sample variance of ``X_k``, so it accounts for
        faces sharing the same samples.
        """
        count = self.samples
        values = []
        errors = []
        for total, squares in zip(self.sum_x, self.sum_x2, strict=True):
            mean = total / count
            variance = max(squares - count * mean * mean, 0.0) / (count - 1) if count > 1 else 0.0
            values.append(mean)
            errors.append(math.sqrt(variance / count))
        return IntrinsicVolumes(n=self.n, values=tuple(values), method=Provenance.MC_ESTIMATE, stderr=tuple(errors))


def sample_faces(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> FaceSample:
    """Draw ``samples`` standard Gaussian vectors in ``R^n`` and classify them against every face."""
    n = validate_dimension(n)
    seed = _validate_seed(seed)
    sizes = chunk_plan(samples, chunk_size)
    threads = resolve_threads(threads)
    classifier = _FaceClassifier(n)
    logger.debug(f"Sampling {samples} Gaussians in R^{n} over {len(sizes)} chunks on {threads} threads")

    def work(index: int, size: int) -> _FaceTally:
        return classifier.tally(substream(seed, index).standard_normal((size, n)))

    tallies = _map_chunks(work, sizes, threads)
    counts = np.sum([t.counts for t in tallies], axis=0)
    sum_x = np.zeros(n + 1)
    sum_x2 = np.zeros(n + 1)
    for tally in tallies:
        sum_x += tally.sum_x
        sum_x2 += tally.sum_x2

    logger.info(f"Classified {samples} samples against {len(classifier.faces)} faces of the n={n} orthoscheme")
    return FaceSample(
        n=n,
        samples=samples,
        seed=seed,
        faces=tuple(classifier.faces),
        counts=tuple(int(c) for c in counts),
        sum_x=tuple(float(x) for x in sum_x),
        sum_x2=tuple(float(x) for x in sum_x2),
        chunk_size=chunk_size,
    )


def mc_gauss_measures(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> dict[FaceIndex, GammaEstimate]:
    """
    Estimate ``gamma_J`` for every face of the orthoscheme.

    Vertex estimates sum to exactly 1; the full face is reported with ``gamma = 1``.
    """
    return sample_faces(n, samples, seed, threads=threads, chunk_size=chunk_size).gamma_estimates()


def mc_intrinsic_volumes(
    n: int,
    samples: int,
    seed: int,
    *,
    threads: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> IntrinsicVolumes:
    """McMullen-assembled ``V_0..V_n`` with correlated standard errors."""
    return sample_faces(n, samples, seed, threads=threads, chunk_size=chunk_size).intrinsic_volumes()


def cone_gauss_mc(
    cone: ConeSpec,
    samples: int,
    seed: int,
    *,
    threads: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> ConeEstimate:
    """
    Gaussian measure of a simplicial cone inside its own linear span.

    Gaussians are drawn in an orthonormal basis of the span and converted to ray
    coordinates; a sample is inside iff every coordinate is ``>= -1e-12``.
    The cone ``{0}`` (no rays) has measure 1.
    """
    seed = _validate_seed(seed)
    sizes = chunk_plan(samples, chunk_size)
    cone.require_simplicial()
    m = cone.ray_count
    if m == 0:
        return ConeEstimate(gamma_hat=1.0, stderr=0.0, samples=samples, seed=seed, label=cone.label)

    to_ray_coordinates = np.linalg.inv(cone.rays_in_span()).T
    threads = resolve_threads(threads)

    def work(index: int, size: int) -> int:
        coordinates = substream(seed, index).standard_normal((size, m)) @ to_ray_coordinates
        return int(np.count_nonzero(np.all(coordinates >= MEMBERSHIP_TOLERANCE, axis=1)))

    hits = sum(_map_chunks(work, sizes, threads))
    gamma_hat = hits / samples
    logger.debug(f"Cone '{cone.label}': {hits}/{samples} samples inside")
    return ConeEstimate(
        gamma_hat=gamma_hat,
        stderr=_binomial_stderr(gamma_hat, samples),
        samples=samples,
        seed=seed,
        label=cone.label,
    )
