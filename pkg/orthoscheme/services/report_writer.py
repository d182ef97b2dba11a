"""
Machine-readable reports for every command.

A report is one JSON document ``{"command", "parameters", "result"}`` or one CSV table
with a fixed header row. Field names and column orders below are frozen; the docs list
them. Floats are written with 17 significant digits so they round-trip exactly.
"""

import csv
import io
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

from orthoscheme.geometry.brownian import BMVolumeRow, LimitRow
from orthoscheme.geometry.cones import mcmullen_assemble
from orthoscheme.geometry.exact import IntrinsicVolumes, Method, Provenance
from orthoscheme.geometry.orthoscheme import FaceIndex, face_volume
from orthoscheme.geometry.sampling import FaceSample
from orthoscheme.geometry.sangwine_yager import SYReport
from orthoscheme.utils import format_duration_ms, format_face, format_float

if TYPE_CHECKING:
    from orthoscheme.services.acceptance import CheckResult

IV_HEADER = ("k", "value", "stderr")
IV_SINGLE_HEADER = ("n", "k", "value")
GAUSS_HEADER = ("face", "k", "face_volume", "gamma_hat", "stderr", "samples", "seed")
EULER_HEADER = ("gamma", "gaussian_measure")
SY_HEADER = ("n", "a_1", "r", "R", "a_n", "max_imag_rel", "max_residual", "pass_bracket", "pass_real")
LIMIT_HEADER = ("n", "k", "scaled_sum", "omega_k", "ratio", "relative_error")
MK_HEADER = ("k", "omega_k", "v_k", "m_k", "m_k_scaled", "log_omega_k", "log_v_k")
VERIFY_HEADER = ("criterion", "name", "passed", "detail")


@dataclass(frozen=True)
class Report:
    command: str
    parameters: Mapping[str, Any]
    result: Mapping[str, Any]
    csv_header: Sequence[str] = ()
    csv_rows: Sequence[Sequence[Any]] = field(default_factory=tuple)

    def render(self, output_format: str) -> str:
        if output_format == "csv":
            return render_csv(self)
        return render_json(self)


def _json_value(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, Enum):
        return json.dumps(value.value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, complex):
        return _json_value({"re": value.real, "im": value.imag}, indent, level)
    if isinstance(value, FaceIndex):
        return json.dumps(format_face(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{closing}}}"
    if isinstance(value, Sequence):
        if not value:
            return "[]"
        items = [f"{pad}{_json_value(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{closing}]"
    if hasattr(value, "item"):
        return _json_value(value.item(), indent, level)
    raise TypeError(f"Cannot render {type(value).__name__} as JSON")


def render_json(report: Report, indent: int = 2) -> str:
    document = {"command": report.command, "parameters": report.parameters, "result": report.result}
    return _json_value(document, indent, 0) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, FaceIndex):
        return format_face(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(report.csv_header)
    for row in report.csv_rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buffer.getvalue()


def iv_value_report(
    n: int, k: int, value: float, method: str = "dp", provenance: Provenance | None = None
) -> Report:
    """One ``V_k``, computed on its own."""
    provenance = provenance or Provenance.for_method(Method(method))
    return Report(
        command="iv",
        parameters={"n": n, "k": k, "method": method},
        result={"n": n, "k": k, "method": provenance, "value": value},
        csv_header=IV_SINGLE_HEADER,
        csv_rows=[(n, k, value)],
    )


def iv_report(volumes: IntrinsicVolumes, k: int | None = None, method: str = "dp") -> Report:
    if k is not None:
        return iv_value_report(volumes.n, k, volumes[k], method, volumes.method)
    parameters = {"n": volumes.n, "k": k, "method": method}
    stderr = volumes.stderr or (None,) * len(volumes)
    return Report(
        command="iv",
        parameters=parameters,
        result={
            "n": volumes.n,
            "method": volumes.method,
            "values": list(volumes.values),
            "stderr": list(volumes.stderr) if volumes.stderr is not None else None,
        },
        csv_header=IV_HEADER,
        csv_rows=[(k, v, e) for k, (v, e) in enumerate(zip(volumes.values, stderr, strict=True))],
    )


def gauss_report(sample: FaceSample, exact: IntrinsicVolumes) -> Report:
    """Per-face estimates plus ``sum_J A_J gamma_hat_J`` per k against the exact volumes."""
    n = sample.n
    estimates = sample.gamma_estimates()
    mc_volumes = sample.intrinsic_volumes()
    gammas = {face: estimate.gamma_hat for face, estimate in estimates.items()}

    faces = [
        {
            "face": face,
            "k": face.k,
            "face_volume": face_volume(n, face),
            "gamma_hat": estimate.gamma_hat,
            "stderr": estimate.stderr,
        }
        for face, estimate in estimates.items()
    ]
    totals = []
    for k in range(n + 1):
        assembled = mcmullen_assemble(n, k, gammas)
        stderr = mc_volumes.stderr[k] if mc_volumes.stderr is not None else 0.0
        delta = assembled - exact[k]
        totals.append(
            {
                "k": k,
                "assembled": assembled,
                "stderr": stderr,
                "exact": exact[k],
                "delta": delta,
                "sigmas": abs(delta) / stderr if stderr > 0 else None,
            }
        )
    return Report(
        command="gauss",
        parameters={"n": n, "samples": sample.samples, "seed": sample.seed, "chunk_size": sample.chunk_size},
        result={"n": n, "samples": sample.samples, "seed": sample.seed, "faces": faces, "totals": totals},
        csv_header=GAUSS_HEADER,
        csv_rows=[
            (row["face"], row["k"], row["face_volume"], row["gamma_hat"], row["stderr"], sample.samples, sample.seed)
            for row in faces
        ],
    )


def euler_report(rays: Sequence[Sequence[float]], gamma: float) -> Report:
    measure = gamma / (4 * math.pi)
    return Report(
        command="euler",
        parameters={"rays": [list(ray) for ray in rays]},
        result={"gamma": gamma, "gaussian_measure": measure},
        csv_header=EULER_HEADER,
        csv_rows=[(gamma, measure)],
    )


def sy_report_document(report: SYReport, imag_threshold: float) -> Report:
    return Report(
        command="sy",
        parameters={"n": report.n, "imag_threshold": imag_threshold},
        result={
            "n": report.n,
            "coefficients": list(report.coefficients),
            "monomial_coefficients": list(report.monomial_coefficients),
            "roots": list(report.roots),
            "max_imag_rel": report.max_imag_rel,
            "max_residual": report.max_residual,
            "r": report.inradius,
            "R": report.circumradius,
            "a_1": report.a_1,
            "a_n": report.a_n,
            "pass_bracket": report.pass_bracket,
            "pass_real": report.pass_real,
        },
        csv_header=SY_HEADER,
        csv_rows=[
            (
                report.n,
                report.a_1,
                report.inradius,
                report.circumradius,
                report.a_n,
                report.max_imag_rel,
                report.max_residual,
                report.pass_bracket,
                report.pass_real,
            )
        ],
    )


def limit_report(k: int, rows: Sequence[LimitRow]) -> Report:
    return Report(
        command="limit",
        parameters={"k": k, "n_list": [row.n for row in rows]},
        result={
            "k": k,
            "rows": [
                {
                    "n": row.n,
                    "scaled_sum": row.scaled_sum,
                    "omega_k": row.omega_k,
                    "ratio": row.ratio,
                    "relative_error": row.relative_error,
                }
                for row in rows
            ],
        },
        csv_header=LIMIT_HEADER,
        csv_rows=[(row.n, row.k, row.scaled_sum, row.omega_k, row.ratio, row.relative_error) for row in rows],
    )


def mk_report(k_max: int, rows: Sequence[BMVolumeRow]) -> Report:
    return Report(
        command="mk",
        parameters={"k_max": k_max},
        result={
            "k_max": k_max,
            "rows": [
                {
                    "k": row.k,
                    "omega_k": row.omega_k,
                    "v_k": row.v_k,
                    "m_k": row.m_k,
                    "m_k_scaled": row.m_k_scaled,
                    "log_omega_k": row.log_omega_k,
                    "log_v_k": row.log_v_k,
                }
                for row in rows
            ],
        },
        csv_header=MK_HEADER,
        csv_rows=[
            (row.k, row.omega_k, row.v_k, row.m_k, row.m_k_scaled, row.log_omega_k, row.log_v_k) for row in rows
        ],
    )


def verify_report(samples: int, seed: int, results: Sequence["CheckResult"]) -> Report:
    passed = sum(result.passed for result in results)
    return Report(
        command="verify",
        parameters={"samples": samples, "seed": seed, "criteria": [r.criterion for r in results]},
        result={
            "passed": passed,
            "total": len(results),
            "all_passed": passed == len(results),
            "checks": [
                {
                    "criterion": r.criterion,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "duration": format_duration_ms(r.duration_ms),
                }
                for r in results
            ],
        },
        csv_header=VERIFY_HEADER,
        csv_rows=[(r.criterion, r.name, r.passed, r.detail) for r in results],
    )
