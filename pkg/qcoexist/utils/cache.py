"""
Simple caching utilities for bundled data assets.

Parsing the preset library and the Raman table is cheap but happens on every
planner call; a short-lived TTL cache keeps repeated sweeps from re-reading
the same files.
"""

from __future__ import annotations
from cachetools import TTLCache
from typing import Callable, Any
from functools import wraps
import threading

# Cache configuration constants
ASSET_CACHE_TTL_SECONDS = 300  # 5 minutes
ASSET_CACHE_MAX_ENTRIES = 64

# Key format: "{module}.{function}:{args!r}"
_asset_cache = TTLCache(maxsize=ASSET_CACHE_MAX_ENTRIES, ttl=ASSET_CACHE_TTL_SECONDS)
_cache_lock = threading.Lock()


def cache_asset(func: Callable) -> Callable:
    """
    Decorator to cache the result of an asset loader.

    Positional and keyword arguments must be hashable; they form the cache
    key together with the function's qualified name. Thread-safe.

    Usage:
        @cache_asset
        def default_spectrum(temperature):
            ...
    """
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        cache_key = f"{func.__module__}.{func.__qualname__}:{args!r}:{sorted(kwargs.items())!r}"

        with _cache_lock:
            if cache_key in _asset_cache:
                return _asset_cache[cache_key]

        result = func(*args, **kwargs)

        with _cache_lock:
            _asset_cache[cache_key] = result

        return result

    return wrapper


def clear_asset_cache() -> None:
    """Clear every cached asset (tests and config reloads)."""
    with _cache_lock:
        _asset_cache.clear()
