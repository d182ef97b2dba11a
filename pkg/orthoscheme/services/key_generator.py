"""Cache key generation for memoized computations"""

import hashlib
import inspect
import json
import math
from collections.abc import Callable
from enum import Enum
from typing import Any

from orthoscheme.exceptions import CacheKeyValidationError
from orthoscheme.geometry.orthoscheme import FaceIndex

MAX_KEY_LENGTH = 250
PROBLEMATIC_CHARS = ("\n", "\r", "\0")


class KeyGenerator:
    """
    Builds ``prefix:module.qualname_<sha256[:16]>`` keys from a call's bound arguments.

    Arguments are bound against the function signature with defaults applied, so
    ``f(3)`` and ``f(n=3)`` share one key. Only plain numeric values, strings, enums,
    face indices and sequences of those are accepted.
    """

    def __init__(self, prefix: str = "orthoscheme") -> None:
        self.prefix = prefix

    def generate_key(self, *, func: Callable[..., Any], args: tuple[Any, ...], kwargs: dict[str, Any]) -> str:
        function_name = f"{func.__module__}.{func.__qualname__}"
        params = self.canonical_params(func=func, args=args, kwargs=kwargs)
        hashed_params = hashlib.sha256(params.encode()).hexdigest()[:16]
        return f"{self.prefix}:{function_name}_{hashed_params}"

    def canonical_params(self, *, func: Callable[..., Any], args: tuple[Any, ...], kwargs: dict[str, Any]) -> str:
        """Deterministic JSON text of the bound arguments"""
        try:
            bound = inspect.signature(func).bind(*args, **kwargs)
        except TypeError as e:
            raise CacheKeyValidationError(f"Cannot bind arguments for '{func.__qualname__}': {e}") from e
        bound.apply_defaults()
        try:
            return json.dumps(
                {name: self._normalize(value) for name, value in bound.arguments.items()},
                sort_keys=True,
                separators=(",", ":"),
            )
        except TypeError as e:
            raise CacheKeyValidationError(f"Arguments of '{func.__qualname__}' are not cachable: {e}") from e

    def _normalize(self, value: Any) -> Any:
        if isinstance(value, Enum):
            return f"{value.__class__.__name__}.{value.name}"
        if isinstance(value, FaceIndex):
            return str(value)
        if isinstance(value, float):
            # repr round-trips and keeps 1 and 1.0 apart from each other's ints
            return repr(float(value)) if math.isfinite(value) else str(float(value))
        if isinstance(value, bool | int | str) or value is None:
            return value
        if hasattr(value, "item") and callable(value.item):
            return self._normalize(value.item())
        if isinstance(value, list | tuple):
            return [self._normalize(item) for item in value]
        raise TypeError(f"unsupported argument type '{type(value).__name__}'")

    def validate_cache_key(self, cache_key: str) -> None:
        """Only Django's length limit and characters that break cache backends"""
        if len(cache_key) > MAX_KEY_LENGTH:
            raise CacheKeyValidationError(f"Cache key too long: {len(cache_key)} chars")

        for char in PROBLEMATIC_CHARS:
            if char in cache_key:
                raise CacheKeyValidationError(f"Cache key contains problematic character: {char!r}")
