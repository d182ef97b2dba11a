import logging
import threading
import time
from collections.abc import Callable
from functools import wraps
from typing import Any, ParamSpec, TypeVar

from orthoscheme.config import get_config
from orthoscheme.exceptions import CacheKeyValidationError
from orthoscheme.services.key_generator import KeyGenerator
from orthoscheme.services.storage_handler import MISS, StorageHandler

logger = logging.getLogger(__name__)

P = ParamSpec("P")
R = TypeVar("R")


class CachedComputation:
    """
    Memoizes a pure computation in the configured Django cache backend.

    Features:

    - The backend is resolved lazily on the first call, so decorated functions can be
      imported before Django settings are configured
    - A one-time health check guards the backend
    - Graceful degradation: any cache failure runs the function uncached
    - Respects ``ORTHOSCHEME["CACHE"]["ENABLED"]`` at call time

    Exceptions raised by the wrapped function are never cached.
    """

    def __init__(self, timeout: int | None = None) -> None:
        self.timeout = timeout
        self._lock = threading.Lock()
        self._resolved = False
        self._healthy = False
        self.storage = StorageHandler(None)
        self.key_generator = KeyGenerator()

    def reset(self) -> None:
        """Forget the resolved backend (after settings changed)"""
        with self._lock:
            self._resolved = False
            self._healthy = False
            self.storage = StorageHandler(None)

    def _resolve_backend(self) -> None:
        with self._lock:
            if self._resolved:
                return
            config = get_config()
            self.key_generator = KeyGenerator(prefix=config.get("CACHE.KEY_PREFIX"))
            backend = config.get_cache_backend()
            if backend is None:
                logger.error(f"Cache backend '{config.get('CACHE.BACKEND')}' not available. Caching is disabled.")
            self.storage = StorageHandler(backend)
            self._healthy = backend is not None and self._health_check_cache_backend(backend)
            self._resolved = True

    def _health_check_cache_backend(self, cache_backend: Any) -> bool:
        """Set, read back and delete a probe key"""
        test_key = f"orthoscheme:health_check_{time.monotonic_ns()}"
        test_value = "health_check_value"
        try:
            cache_backend.set(test_key, test_value, 10)
            retrieved_value = cache_backend.get(test_key)
            cache_backend.delete(test_key)
        except Exception as e:  # noqa: BLE001
            logger.error(f"Unexpected cache backend health check error: {e}")  # noqa: TRY400
            return False
        if retrieved_value != test_value:
            logger.warning("Cache backend health check failed: set/get mismatch")
            return False
        return True

    def __call__(self, func: Callable[P, R]) -> Callable[P, R]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            return self._execute_with_cache(func, *args, **kwargs)

        wrapper._orthoscheme_cache = self  # type: ignore[attr-defined]
        wrapper._orthoscheme_original = func  # type: ignore[attr-defined]
        return wrapper

    def _execute_with_cache(self, func: Callable[P, R], *args: P.args, **kwargs: P.kwargs) -> R:
        if not get_config().is_cache_enabled():
            return func(*args, **kwargs)

        self._resolve_backend()
        if not self._healthy:
            return func(*args, **kwargs)

        try:
            cache_key = self.key_generator.generate_key(func=func, args=args, kwargs=kwargs)
            self.key_generator.validate_cache_key(cache_key)
        except CacheKeyValidationError as e:
            logger.error(f"Cache key validation failed: {e}")  # noqa: TRY400
            return func(*args, **kwargs)

        cached_result = self.storage.get(cache_key)
        if cached_result is not MISS:
            logger.debug(f"Cache hit for '{cache_key}'")
            return cached_result  # type: ignore[no-any-return]

        result = func(*args, **kwargs)
        timeout = self.timeout if self.timeout is not None else get_config().get("CACHE.TIMEOUT")
        self.storage.set(cache_key, result, timeout)
        logger.debug(f"Cached result under '{cache_key}'")
        return result


def cached_computation(timeout: int | None = None) -> CachedComputation:
    """
    Decorator memoizing a pure function in the Django cache.

    Usage:
        @cached_computation()
        def exact_volumes(n: int, method: str = "dp") -> IntrinsicVolumes: ...
    """
    return CachedComputation(timeout=timeout)
