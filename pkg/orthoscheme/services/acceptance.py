"""
The reproduction suite behind ``orthoscheme verify``.

Each check is a numbered criterion. Statistical checks accept a deviation of up to
``SIGMA_BOUND`` standard errors; everything is seeded, so a given
``(samples, seed, chunk_size)`` always gives the same verdicts.
"""

import logging
import math
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from orthoscheme.config import get_config
from orthoscheme.geometry.brownian import SQRT_TWO_PI, is_strictly_decreasing, limit_rows, mk_values
from orthoscheme.geometry.cones import block_cone_rays, e_cone_rays, euler_solid_angle, mcmullen_assemble
from orthoscheme.geometry.exact import (
    Method,
    composition_sum_dp,
    composition_sum_enumerate,
    intrinsic_volume,
    intrinsic_volumes_all,
)
from orthoscheme.geometry.orthoscheme import FaceIndex
from orthoscheme.geometry.sampling import ConeEstimate, cone_gauss_mc, sample_faces
from orthoscheme.services.computations import sy_report
from orthoscheme.services.report_writer import gauss_report, render_json

logger = logging.getLogger(__name__)

SIGMA_BOUND = 4.0
EXACT_TOLERANCE = 1e-12
# Deterministic checks run regardless of the sample budget.
DETERMINISTIC_CRITERIA = frozenset({1, 2, 3, 6, 9, 10, 11})

# Edge values of the low-dimensional worked examples, in lexicographic face order.
N3_EDGE_GAMMAS = {
    FaceIndex.of(0, 1): 3 / 8,
    FaceIndex.of(0, 2): 1 / 4,
    FaceIndex.of(0, 3): 1 / 3,
    FaceIndex.of(1, 2): 1 / 4,
    FaceIndex.of(1, 3): 1 / 4,
    FaceIndex.of(2, 3): 3 / 8,
}
N4_EDGE_GAMMAS = {
    FaceIndex.of(0, 1): 5 / 16,
    FaceIndex.of(0, 2): 3 / 16,
    FaceIndex.of(0, 3): 1 / 6,
    FaceIndex.of(0, 4): 1 / 4,
    FaceIndex.of(1, 2): 3 / 16,
    FaceIndex.of(1, 3): 1 / 8,
    FaceIndex.of(1, 4): 1 / 6,
    FaceIndex.of(2, 3): 3 / 16,
    FaceIndex.of(2, 4): 3 / 16,
    FaceIndex.of(3, 4): 5 / 16,
}
# Normals of the facets through the edge P_0 P_1 of the 4-dimensional orthoscheme, restricted to R^3.
N4_EDGE_01_NORMALS = (
    (0.0, 0.0, -1.0),
    (0.0, -math.sqrt(0.5), math.sqrt(0.5)),
    (-math.sqrt(0.5), math.sqrt(0.5), 0.0),
)


@dataclass(frozen=True)
class SamplingPlan:
    samples: int
    seed: int
    threads: int | None = None
    chunk_size: int = 65536


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    duration_ms: float = 0.0


def within_sigmas(estimate: float, target: float, stderr: float, bound: float = SIGMA_BOUND) -> bool:
    return abs(estimate - target) <= bound * stderr + EXACT_TOLERANCE


def _edge_gamma_check(n: int, targets: dict[FaceIndex, float], plan: SamplingPlan) -> tuple[bool, str]:
    estimates = sample_faces(n, plan.samples, plan.seed, threads=plan.threads, chunk_size=plan.chunk_size)
    gammas = estimates.gamma_estimates()
    worst_face, worst = None, 0.0
    failures = []
    for face, target in targets.items():
        estimate = gammas[face]
        sigmas = abs(estimate.gamma_hat - target) / estimate.stderr if estimate.stderr > 0 else 0.0
        if sigmas > worst:
            worst_face, worst = face, sigmas
        if not within_sigmas(estimate.gamma_hat, target, estimate.stderr):
            failures.append(str(face))
    detail = f"worst deviation {worst:.2f} sigma at face {worst_face}"
    if failures:
        detail += f"; outside {SIGMA_BOUND:g} sigma: {', '.join(failures)}"
    return not failures, detail


def check_n3_volume(_: SamplingPlan) -> tuple[bool, str]:
    value = intrinsic_volume(3, 1)
    expected = 1 + 1 / math.sqrt(2) + 1 / math.sqrt(3)
    return abs(value - expected) <= EXACT_TOLERANCE, f"V_1 = {value!r}, expected {expected!r}"


def check_n4_volume(_: SamplingPlan) -> tuple[bool, str]:
    value = intrinsic_volume(4, 1)
    expected = 1 + 1 / math.sqrt(2) + 1 / math.sqrt(3) + 0.5
    return abs(value - expected) <= EXACT_TOLERANCE, f"V_1 = {value!r}, expected {expected!r}"


def check_oracle_equivalence(_: SamplingPlan) -> tuple[bool, str]:
    worst = 0.0
    for n in range(1, 13):
        for k in range(1, n + 1):
            dp, enumerated = composition_sum_dp(n, k), composition_sum_enumerate(n, k)
            worst = max(worst, abs(dp - enumerated) / enumerated)
    return worst <= EXACT_TOLERANCE, f"max relative gap {worst:.3g} over n <= 12"


def check_n3_gammas(plan: SamplingPlan) -> tuple[bool, str]:
    return _edge_gamma_check(3, N3_EDGE_GAMMAS, plan)


def check_n4_gammas(plan: SamplingPlan) -> tuple[bool, str]:
    return _edge_gamma_check(4, N4_EDGE_GAMMAS, plan)


def check_euler_formula(_: SamplingPlan) -> tuple[bool, str]:
    gamma = euler_solid_angle(*N4_EDGE_01_NORMALS)
    measure = gamma / (4 * math.pi)
    passed = abs(gamma - 5 * math.pi / 4) <= EXACT_TOLERANCE and abs(measure - 5 / 16) <= EXACT_TOLERANCE
    return passed, f"Gamma = {gamma!r}, Gamma/(4 pi) = {measure!r}"


def check_mcmullen_assembly(plan: SamplingPlan) -> tuple[bool, str]:
    failures = []
    worst = 0.0
    for n in range(1, 7):
        sample = sample_faces(n, plan.samples, plan.seed + n, threads=plan.threads, chunk_size=plan.chunk_size)
        gammas = {face: estimate.gamma_hat for face, estimate in sample.gamma_estimates().items()}
        stderr = sample.intrinsic_volumes().stderr or (0.0,) * (n + 1)
        exact = intrinsic_volumes_all(n, Method.DP)
        for k in range(n + 1):
            assembled = mcmullen_assemble(n, k, gammas)
            if stderr[k] > 0:
                worst = max(worst, abs(assembled - exact[k]) / stderr[k])
            if not within_sigmas(assembled, exact[k], stderr[k]):
                failures.append(f"n={n},k={k}")
    detail = f"worst deviation {worst:.2f} sigma over n <= 6"
    if failures:
        detail += f"; failing: {', '.join(failures)}"
    return not failures, detail


def check_cone_identities(plan: SamplingPlan) -> tuple[bool, str]:
    """Factorization through E-cones, the E-cone partition, and the block-cone partition."""
    failures = []
    e_cones: dict[tuple[int, int, int], ConeEstimate] = {}
    stream = 1000

    def e_cone(n: int, d: int, i0: int) -> ConeEstimate:
        nonlocal stream
        if (n, d, i0) not in e_cones:
            stream += 1
            e_cones[n, d, i0] = cone_gauss_mc(
                e_cone_rays(n, d, i0),
                plan.samples,
                plan.seed + stream,
                threads=plan.threads,
                chunk_size=plan.chunk_size,
            )
        return e_cones[n, d, i0]

    for n in range(1, 7):
        sample = sample_faces(n, plan.samples, plan.seed + n, threads=plan.threads, chunk_size=plan.chunk_size)
        for face, estimate in sample.gamma_estimates().items():
            cone = e_cone(n, face.span, face.first)
            scaled = estimate.gamma_hat * face.gap_product
            combined = math.hypot(estimate.stderr * face.gap_product, cone.stderr)
            if not within_sigmas(scaled, cone.gamma_hat, combined):
                failures.append(f"factorization n={n} J={{{face}}}")

        for d in range(1, n + 1):
            parts = [e_cone(n, d, i0) for i0 in range(n - d + 1)]
            total = math.fsum(p.gamma_hat for p in parts)
            combined = math.sqrt(math.fsum(p.stderr**2 for p in parts))
            if not within_sigmas(total, 1.0, combined):
                failures.append(f"E-partition n={n} d={d}")

    for d in range(2, 7):
        blocks = [
            cone_gauss_mc(
                block_cone_rays(d, l),
                plan.samples,
                plan.seed + 5000 + 10 * d + l,
                threads=plan.threads,
                chunk_size=plan.chunk_size,
            )
            for l in range(d)  # noqa: E741
        ]
        total = math.fsum(b.gamma_hat for b in blocks)
        combined = math.sqrt(math.fsum(b.stderr**2 for b in blocks))
        if not within_sigmas(total, 1.0, combined):
            failures.append(f"B-partition d={d}")
        for l, block in enumerate(blocks[1:], start=1):  # noqa: E741
            if not within_sigmas(block.gamma_hat, blocks[0].gamma_hat, math.hypot(block.stderr, blocks[0].stderr)):
                failures.append(f"B-equal d={d} l={l}")

    detail = f"{len(e_cones)} E-cones and 20 block cones sampled"
    if failures:
        detail += f"; failing: {', '.join(failures[:10])}"
    return not failures, detail


def check_root_location(_: SamplingPlan) -> tuple[bool, str]:
    """The bracket and realness verdicts under the ``ROOTS`` settings."""
    config = get_config()
    failures = []
    worst_residual = 0.0
    for n in range(1, 22):
        report = sy_report(
            n,
            config.get("ROOTS.IMAG_THRESHOLD"),
            config.get("ROOTS.SLACK"),
            config.get("ROOTS.RESIDUAL_TOLERANCE"),
            config.get("ROOTS.MPMATH_DPS"),
        )
        worst_residual = max(worst_residual, report.max_residual)
        if not report.passed:
            failures.append(str(n))
    detail = f"n = 1..21, max root residual {worst_residual:.3g}"
    if failures:
        detail += f"; failing n: {', '.join(failures)}"
    return not failures, detail


def check_riemann_limit(_: SamplingPlan) -> tuple[bool, str]:
    ns = [100, 1000, 10000]
    failures = []
    details = []
    for k in range(1, 5):
        rows = limit_rows(k, ns)
        ratios = [row.ratio for row in rows]
        details.append(f"k={k}: {ratios[-1]:.6f}")
        if rows[-1].relative_error > 0.05 or not all(a < b for a, b in zip(ratios, ratios[1:], strict=False)):
            failures.append(str(k))
    detail = "ratio to omega_k at n=10^4 " + ", ".join(details)
    if failures:
        detail += f"; failing k: {', '.join(failures)}"
    return not failures, detail


def check_mk_tail(_: SamplingPlan) -> tuple[bool, str]:
    values = mk_values(100_000)
    decreasing = is_strictly_decreasing(values)
    scaled = float(values[10_000 - 1]) * 100
    gap = abs(scaled - SQRT_TWO_PI) / SQRT_TWO_PI
    return decreasing and gap <= 0.01, f"decreasing={decreasing}, m_k sqrt(k) at k=10^4 is {scaled:.8f} ({gap:.2e})"


def check_determinism(plan: SamplingPlan) -> tuple[bool, str]:
    exact = intrinsic_volumes_all(4, Method.DP)
    outputs = [
        render_json(gauss_report(sample_faces(4, plan.samples, 42, threads=threads, chunk_size=plan.chunk_size), exact))
        for threads in (1, 8)
    ]
    return outputs[0] == outputs[1], "gauss n=4 seed=42 at 1 and 8 threads " + (
        "identical" if outputs[0] == outputs[1] else "differ"
    )


CHECKS: tuple[tuple[int, str, Callable[[SamplingPlan], tuple[bool, str]]], ...] = (
    (1, "V_1 of the 3-dimensional orthoscheme", check_n3_volume),
    (2, "V_1 of the 4-dimensional orthoscheme", check_n4_volume),
    (3, "dynamic program matches enumeration", check_oracle_equivalence),
    (4, "edge gammas, n=3", check_n3_gammas),
    (5, "edge gammas, n=4", check_n4_gammas),
    (6, "solid angle of the three facet normals", check_euler_formula),
    (7, "McMullen assembly from sampled gammas", check_mcmullen_assembly),
    (8, "E-cone factorization and cone partitions", check_cone_identities),
    (9, "root location for n = 1..21", check_root_location),
    (10, "Riemann-sum limit to omega_k", check_riemann_limit),
    (11, "m_k decreasing with sqrt(2 pi) tail", check_mk_tail),
    (12, "thread-count independence", check_determinism),
)


def run_acceptance(plan: SamplingPlan, only: Iterable[int] | None = None) -> list[CheckResult]:
    selected = set(only) if only is not None else {criterion for criterion, _, _ in CHECKS}
    results = []
    for criterion, name, check in CHECKS:
        if criterion not in selected:
            continue
        started = time.perf_counter()
        passed, detail = check(plan)
        duration_ms = (time.perf_counter() - started) * 1000
        logger.info(f"Check {criterion} ({name}): {'pass' if passed else 'FAIL'} - {detail}")
        results.append(CheckResult(criterion, name, passed, detail, duration_ms))
    return results

