from .cached import CachedComputation, cached_computation

__all__ = ["CachedComputation", "cached_computation"]
