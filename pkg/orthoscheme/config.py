"""Django Orthoscheme Configuration System"""

import copy
import logging
import math
import threading
from typing import Any, NamedTuple

import environ
from django.conf import settings
from django.core.cache import caches
from django.core.exceptions import ImproperlyConfigured

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "ORTHOSCHEME_THREADS"
# Escalated root finding must work above double precision.
DOUBLE_DIGITS = 15


class OrthoschemeConfig:
    """Centralized configuration management for Django Orthoscheme"""

    _instance = None
    _lock = threading.RLock()

    DEFAULT_CONFIG = {
        "CACHE": {
            "ENABLED": True,
            "BACKEND": "default",
            "KEY_PREFIX": "orthoscheme",
            # Results are pure functions of their inputs
            "TIMEOUT": None,
        },
        "SAMPLING": {
            "SAMPLES": 1_000_000,
            "SEED": 0,
            "CHUNK_SIZE": 65536,
            "THREADS": None,
        },
        "EXACT": {
            "TERM_BUDGET": 10**8,
        },
        "ROOTS": {
            "RESIDUAL_TOLERANCE": 1e-10,
            "IMAG_THRESHOLD": 1e-8,
            "SLACK": 1e-9,
            "MPMATH_DPS": 60,
        },
    }

    def __new__(cls) -> "OrthoschemeConfig":
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._config = {}
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        if not self._initialized:
            self._load_config()
            self._initialized = True

    def _load_config(self) -> None:
        """Load configuration from Django settings"""
        config = merged_settings()
        validate_config(config)
        self._config = config

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dotted key, e.g. ``SAMPLING.SEED``"""
        value = self._config
        for k in key.split("."):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> None:
        """Set configuration value"""
        with self._lock:
            keys = key.split(".")
            config = self._config

            for k in keys[:-1]:
                if k not in config:
                    config[k] = {}
                elif not isinstance(config[k], dict):
                    raise ValueError(f"Cannot set '{key}': intermediate key '{k}' is not a dictionary")
                config = config[k]

            config[keys[-1]] = value

    def is_cache_enabled(self) -> bool:
        return bool(self.get("CACHE.ENABLED", False))

    def get_cache_backend(self) -> Any:
        """Cache backend instance, or None when it cannot be created"""
        backend_name = self.get("CACHE.BACKEND")
        try:
            return caches[backend_name]
        except Exception as e:
            logger.warning(f"Failed to initialize cache backend '{backend_name}': {e}")
            return None

    def default_threads(self) -> int | None:
        """Thread count from ``ORTHOSCHEME_THREADS``, else ``SAMPLING.THREADS``"""
        env = environ.Env()
        from_env = env.int(THREADS_ENV_VAR, default=None)
        if from_env is not None:
            return from_env
        return self.get("SAMPLING.THREADS")

    def reload_config(self) -> None:
        """Reload configuration from Django settings"""
        with self._lock:
            old_config = copy.deepcopy(self._config)
            try:
                self._load_config()
            except Exception:
                self._config = old_config
                raise

    def get_full_config(self) -> dict[str, Any]:
        """Get full configuration (for debugging)"""
        return copy.deepcopy(self._config)


def validate_config(config: dict[str, Any]) -> None:
    """Raise ImproperlyConfigured for the first problem found"""
    for problem in config_problems(config):
        raise ImproperlyConfigured(problem.message)


class ConfigProblem(NamedTuple):
    section: str
    message: str


def _is_real(value: Any) -> bool:
    return isinstance(value, int | float) and not isinstance(value, bool) and math.isfinite(value)


def config_problems(config: dict[str, Any]) -> list[ConfigProblem]:
    """Everything wrong with a merged configuration, tagged with its section"""
    problems = []
    backend = config["CACHE"]["BACKEND"]
    if config["CACHE"]["ENABLED"] and backend not in getattr(settings, "CACHES", {}):
        problems.append(ConfigProblem("CACHE", f"Orthoscheme cache backend '{backend}' not found in CACHES setting"))

    for key in ("SAMPLES", "CHUNK_SIZE"):
        value = config["SAMPLING"][key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            problems.append(
                ConfigProblem("SAMPLING", f"ORTHOSCHEME SAMPLING.{key} must be a positive integer, got {value!r}")
            )

    threads = config["SAMPLING"]["THREADS"]
    if threads is not None and (not isinstance(threads, int) or threads < 1):
        problems.append(
            ConfigProblem(
                "SAMPLING", f"ORTHOSCHEME SAMPLING.THREADS must be None or a positive integer, got {threads!r}"
            )
        )

    seed = config["SAMPLING"]["SEED"]
    if not isinstance(seed, int) or seed < 0:
        problems.append(
            ConfigProblem("SAMPLING", f"ORTHOSCHEME SAMPLING.SEED must be a nonnegative integer, got {seed!r}")
        )

    budget = config["EXACT"]["TERM_BUDGET"]
    if not isinstance(budget, int) or budget < 1:
        problems.append(
            ConfigProblem("EXACT", f"ORTHOSCHEME EXACT.TERM_BUDGET must be a positive integer, got {budget!r}")
        )

    roots = config["ROOTS"]
    for key in ("RESIDUAL_TOLERANCE", "IMAG_THRESHOLD"):
        if not _is_real(roots[key]) or not 0 < roots[key] < 1:
            problems.append(ConfigProblem("ROOTS", f"ORTHOSCHEME ROOTS.{key} must lie in (0, 1), got {roots[key]!r}"))
    slack = roots["SLACK"]
    if not _is_real(slack) or not 0 <= slack < 1:
        problems.append(ConfigProblem("ROOTS", f"ORTHOSCHEME ROOTS.SLACK must lie in [0, 1), got {slack!r}"))
    dps = roots["MPMATH_DPS"]
    if not isinstance(dps, int) or isinstance(dps, bool) or dps <= DOUBLE_DIGITS:
        problems.append(
            ConfigProblem(
                "ROOTS", f"ORTHOSCHEME ROOTS.MPMATH_DPS must be an integer above {DOUBLE_DIGITS}, got {dps!r}"
            )
        )
    return problems


def get_config() -> OrthoschemeConfig:
    """Get the global configuration instance"""
    return OrthoschemeConfig()


def reload_config() -> None:
    """Reload configuration from Django settings"""
    get_config().reload_config()


def _deep_update(*, base_dict: dict[str, Any], update_dict: dict[str, Any]) -> None:
    """Deep update dictionary"""
    for key, value in update_dict.items():
        if isinstance(value, dict) and key in base_dict and isinstance(base_dict[key], dict):
            _deep_update(base_dict=base_dict[key], update_dict=value)
        else:
            base_dict[key] = value


def merged_settings() -> dict[str, Any]:
    """``DEFAULT_CONFIG`` overlaid with ``settings.ORTHOSCHEME``, not validated"""
    config = copy.deepcopy(OrthoschemeConfig.DEFAULT_CONFIG)
    _deep_update(base_dict=config, update_dict=getattr(settings, "ORTHOSCHEME", {}))
    return config
