import logging
from typing import Any

logger = logging.getLogger(__name__)

# Distinguishes "not cached" from a cached falsy value.
MISS = object()


class StorageHandler:
    """Cache reads and writes that log and swallow backend failures"""

    def __init__(self, cache_backend: Any) -> None:
        self.cache = cache_backend

    def get(self, key: str) -> Any:
        """Cached value, or ``MISS``"""
        if self.cache is None:
            return MISS
        try:
            return self.cache.get(key, MISS)
        except Exception as e:  # noqa: BLE001
            logger.warning(f"Cache get failed for key '{key}': {e}")
            return MISS

    def set(self, key: str, value: Any, timeout: int | None) -> bool:
        if self.cache is None:
            return False
        try:
            self.cache.set(key, value, timeout)
        except Exception as e:  # noqa: BLE001
            logger.warning(f"Cache set failed for key '{key}': {e}")
            return False
        return True

    def delete(self, key: str) -> bool:
        if self.cache is None:
            return False
        try:
            return bool(self.cache.delete(key))
        except Exception as e:  # noqa: BLE001
            logger.warning(f"Cache delete failed for key '{key}': {e}")
            return False

    def clear(self) -> bool:
        """Drop every entry of the backend"""
        if self.cache is None:
            return False
        try:
            self.cache.clear()
        except Exception as e:  # noqa: BLE001
            logger.warning(f"Cache clear failed: {e}")
            return False
        return True
