from argparse import ArgumentParser
from pathlib import Path
from typing import Any, NoReturn

from django.core.management.base import BaseCommand, CommandError, CommandParser

from orthoscheme.config import get_config
from orthoscheme.exceptions import BudgetExceeded, NumericalError, OrthoschemeException, RootPrecisionFailure
from orthoscheme.geometry.brownian import limit_rows, mk_sequence
from orthoscheme.geometry.cones import euler_solid_angle
from orthoscheme.geometry.sampling import sample_faces
from orthoscheme.services.acceptance import DETERMINISTIC_CRITERIA, SamplingPlan, run_acceptance
from orthoscheme.services.computations import exact_volume, exact_volumes, sy_report
from orthoscheme.services.report_writer import (
    Report,
    euler_report,
    gauss_report,
    iv_report,
    iv_value_report,
    limit_report,
    mk_report,
    sy_report_document,
    verify_report,
)
from orthoscheme.services.storage_handler import StorageHandler
from orthoscheme.utils.validation import CommandInputValidator

EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class SubcommandParser(CommandParser):
    """Sub-command parser whose errors carry the usage exit code"""

    def error(self, message: str) -> NoReturn:
        raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(text)
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(text)
    return value


class Command(BaseCommand):
    help = "Intrinsic volumes of the orthoscheme: exact values, cone measures and reproduction checks"

    def add_arguments(self, parser: CommandParser) -> None:
        config = get_config()
        subparsers = parser.add_subparsers(
            dest="subcommand", parser_class=SubcommandParser, help="Available computations"
        )
        subparsers.required = True

        iv_parser = subparsers.add_parser("iv", help="Exact intrinsic volumes")
        iv_parser.add_argument("--n", type=_positive_int, required=True, help="Dimension")
        iv_parser.add_argument("--k", type=_nonnegative_int, help="Only V_k")
        iv_parser.add_argument("--method", choices=["dp", "enum"], default="dp")
        iv_parser.add_argument(
            "--term-budget",
            type=_positive_int,
            default=config.get("EXACT.TERM_BUDGET"),
            help="Largest number of compositions the enum method may visit",
        )
        self._add_output_arguments(iv_parser)

        gauss_parser = subparsers.add_parser("gauss", help="Monte Carlo Gaussian measures of all normal cones")
        gauss_parser.add_argument("--n", type=_positive_int, required=True)
        self._add_sampling_arguments(gauss_parser, config)
        self._add_output_arguments(gauss_parser)

        euler_parser = subparsers.add_parser("euler", help="Solid angle of a three-ray cone")
        euler_parser.add_argument("--rays", required=True, help="a1,a2,a3,b1,b2,b3,c1,c2,c3")
        self._add_output_arguments(euler_parser)

        sy_parser = subparsers.add_parser("sy", help="Root location of the quermassintegral polynomial")
        sy_parser.add_argument("--n", type=_positive_int, required=True)
        sy_parser.add_argument("--imag-threshold", type=float, default=config.get("ROOTS.IMAG_THRESHOLD"))
        sy_parser.add_argument("--slack", type=float, default=config.get("ROOTS.SLACK"))
        self._add_output_arguments(sy_parser)

        limit_parser = subparsers.add_parser("limit", help="Scaled composition sums against omega_k")
        limit_parser.add_argument("--k", type=_positive_int, required=True)
        limit_parser.add_argument("--n-list", required=True, help="Comma-separated dimensions, e.g. 100,1000,10000")
        self._add_output_arguments(limit_parser)

        mk_parser = subparsers.add_parser("mk", help="Brownian motion body volumes and m_k")
        mk_parser.add_argument("--k-max", type=_positive_int, required=True)
        self._add_output_arguments(mk_parser)

        verify_parser = subparsers.add_parser("verify", help="Run the full reproduction suite")
        self._add_sampling_arguments(verify_parser, config)
        verify_parser.add_argument("--only", help="Comma-separated criterion numbers")
        verify_parser.add_argument(
            "--exact-only", action="store_true", help="Skip the Monte Carlo criteria (4, 5, 7, 8, 12)"
        )
        self._add_output_arguments(verify_parser)

        cache_parser = subparsers.add_parser("cache", help="Inspect or clear the result cache")
        cache_parser.add_argument("action", choices=["status", "clear"])

    def _add_sampling_arguments(self, parser: ArgumentParser, config: Any) -> None:
        parser.add_argument("--samples", type=_positive_int, default=config.get("SAMPLING.SAMPLES"))
        parser.add_argument("--seed", type=_nonnegative_int, default=config.get("SAMPLING.SEED"))
        parser.add_argument("--threads", type=_positive_int, help="Worker threads (default: ORTHOSCHEME_THREADS)")
        parser.add_argument("--chunk-size", type=_positive_int, default=config.get("SAMPLING.CHUNK_SIZE"))

    def _add_output_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("--format", choices=["json", "csv"], default="json")
        parser.add_argument("--output", type=Path, help="Write the report to this file instead of stdout")

    def handle(self, *args: Any, **options: Any) -> None:
        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            handler(**options)
        except (BudgetExceeded, RootPrecisionFailure, NumericalError) as e:
            raise CommandError(f"{e.__class__.__name__}: {e}", returncode=EXIT_NUMERICAL) from e
        except (OrthoschemeException, ValueError) as e:
            raise CommandError(f"{e.__class__.__name__}: {e}", returncode=EXIT_USAGE) from e

    def _emit(self, report: Report, options: dict[str, Any]) -> None:
        text = report.render(options["format"])
        output: Path | None = options.get("output")
        if output is None:
            self.stdout.write(text, ending="")
        else:
            output.write_text(text, encoding="utf-8", newline="")

    def _threads(self, options: dict[str, Any]) -> int | None:
        return options.get("threads") or get_config().default_threads()

    def handle_iv(self, **options: Any) -> None:
        n, k = options["n"], options.get("k")
        if k is not None and k > n:
            raise CommandError(f"--k must lie in [0, {n}], got {k}", returncode=EXIT_USAGE)
        if k is not None:
            value = exact_volume(n, k, options["method"], options["term_budget"])
            self._emit(iv_value_report(n, k, value, options["method"]), options)
            return
        volumes = exact_volumes(n, options["method"], options["term_budget"])
        self._emit(iv_report(volumes, method=options["method"]), options)

    def handle_gauss(self, **options: Any) -> None:
        n = options["n"]
        sample = sample_faces(
            n, options["samples"], options["seed"], threads=self._threads(options), chunk_size=options["chunk_size"]
        )
        self._emit(gauss_report(sample, exact_volumes(n)), options)

    def handle_euler(self, **options: Any) -> None:
        rays = CommandInputValidator.parse_euler_rays(options["rays"])
        self._emit(euler_report(rays, euler_solid_angle(*rays)), options)

    def handle_sy(self, **options: Any) -> None:
        config = get_config()
        report = sy_report(
            options["n"],
            options["imag_threshold"],
            options["slack"],
            config.get("ROOTS.RESIDUAL_TOLERANCE"),
            config.get("ROOTS.MPMATH_DPS"),
        )
        self._emit(sy_report_document(report, options["imag_threshold"]), options)
        if not report.passed:
            raise CommandError(
                f"Root location check failed for n={report.n} "
                f"(bracket={report.pass_bracket}, real={report.pass_real})",
                returncode=EXIT_FAILED_CHECK,
            )

    def handle_limit(self, **options: Any) -> None:
        ns = CommandInputValidator.parse_int_list(options["n_list"], minimum=options["k"])
        self._emit(limit_report(options["k"], limit_rows(options["k"], ns)), options)

    def handle_mk(self, **options: Any) -> None:
        self._emit(mk_report(options["k_max"], mk_sequence(options["k_max"])), options)

    def handle_verify(self, **options: Any) -> None:
        only = None
        if options.get("only"):
            only = set(CommandInputValidator.parse_int_list(options["only"]))
        if options.get("exact_only"):
            only = (only or DETERMINISTIC_CRITERIA) & DETERMINISTIC_CRITERIA

        plan = SamplingPlan(
            samples=options["samples"],
            seed=options["seed"],
            threads=self._threads(options),
            chunk_size=options["chunk_size"],
        )
        results = run_acceptance(plan, only)
        self._emit(verify_report(plan.samples, plan.seed, results), options)
        failed = [str(r.criterion) for r in results if not r.passed]
        if failed:
            raise CommandError(
                f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}",
                returncode=EXIT_FAILED_CHECK,
            )

    def handle_cache(self, **options: Any) -> None:
        config = get_config()
        backend_name = config.get("CACHE.BACKEND")
        storage = StorageHandler(config.get_cache_backend())
        if options["action"] == "status":
            self.stdout.write(self.style.SUCCESS(f"Orthoscheme result cache - backend '{backend_name}'"))
            self.stdout.write(f"  Enabled: {config.is_cache_enabled()}")
            self.stdout.write(f"  Key prefix: {config.get('CACHE.KEY_PREFIX')}")
            if storage.cache is None:
                self.stdout.write(self.style.ERROR("  Status: unavailable"))
            else:
                self.stdout.write("  Status: Connected")
                self.stdout.write(f"  Type: {storage.cache.__class__.__name__}")
        elif storage.clear():
            self.stdout.write(self.style.SUCCESS(f"Cleared cache backend '{backend_name}'"))
        else:
            self.stdout.write(self.style.WARNING(f"Could not clear cache backend '{backend_name}'"))
