"""
Persistent caching using diskcache.

Jones-Wenzl idempotents are the only expensive intermediate that is worth
keeping across runs. They are stored as plain tuples so that cache entries
do not depend on class layouts:

    ((partner, numerators, denominator), ...)
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import diskcache as dc

logger = logging.getLogger(__name__)

PlainJW = Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], int], ...]


class JWStore:
    """Disk-backed store of Jones-Wenzl expansions keyed by (p, w)."""

    def __init__(self, cache_dir: str = "./cache/jw", size_limit: int = int(200e6)):
        """Initialize JW store."""
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

        self.cache = dc.Cache(
            directory=str(self.cache_dir),
            size_limit=size_limit,
            eviction_policy='least-recently-used'
        )
        self.hits = 0
        self.misses = 0

    def _make_cache_key(self, p: int, w: int) -> str:
        """Create cache key from prime and width."""
        key_data = {'kind': 'jones_wenzl', 'p': p, 'w': w}
        key_str = json.dumps(key_data, sort_keys=True)
        return f"jw:{hashlib.md5(key_str.encode()).hexdigest()}"

    def get(self, p: int, w: int) -> Optional[PlainJW]:
        """Get a stored expansion, or None."""
        result = self.cache.get(self._make_cache_key(p, w))
        if result is None:
            self.misses += 1
            return None
        self.hits += 1
        return tuple(result)

    def set(self, p: int, w: int, value: PlainJW, expire: Optional[int] = None) -> None:
        """Store an expansion."""
        self.cache.set(self._make_cache_key(p, w), tuple(value), expire=expire)
        logger.debug(f"stored Jones-Wenzl width {w}", extra={'p': p, 'width': w,
                                                             'event_type': 'jw_stored'})

    def clear(self) -> None:
        self.cache.clear()

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        return {
            'size': len(self.cache),
            'volume': self.cache.volume(),
            'directory': str(self.cache_dir),
            'hits': self.hits,
            'misses': self.misses,
        }

    def close(self) -> None:
        """Close cache."""
        self.cache.close()

    def __enter__(self):
        return self

    def __exit__(self, *_):
        self.close()
