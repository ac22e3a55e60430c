"""
Lattice Cache

Keeps enumerated subgroup lattices in memory and on disk. Records are keyed
by a hash of the ambient group's reflection multiplication table, so two
builds of the same group share one file.
"""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from threading import Lock
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def table_key(table: List[List[int]]) -> str:
    """SHA-256 of a canonical JSON encoding of a reflection multiplication table."""
    payload = json.dumps(table, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


class LatticeCache:
    """Lattice cache service"""

    def __init__(self, directory: Optional[Path] = None, enabled: bool = True):
        """
        Initialize the cache

        Args:
            directory: Where JSON records are stored; memory only when None
            enabled: When False every lookup misses and nothing is written
        """
        self.directory = Path(directory) if directory else None
        self.enabled = enabled
        self._memory: Dict[str, Dict[str, Any]] = {}
        self._lock = Lock()
        self._hits = 0
        self._misses = 0

    def _path(self, key: str) -> Optional[Path]:
        if self.directory is None:
            return None
        return self.directory / f"lattice-{key[:32]}.json"

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Retrieve a lattice record

        Args:
            key: Table hash from table_key()

        Returns:
            The stored record, or None on a miss or a stale format version
        """
        if not self.enabled:
            return None
        with self._lock:
            record = self._memory.get(key)
            if record is not None:
                self._hits += 1
                return record
        path = self._path(key)
        if path is not None and path.exists():
            try:
                with open(path, "r", encoding="utf-8") as f:
                    record = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("Ignoring unreadable lattice cache file %s: %s", path, e)
                record = None
            if record and record.get("version") == FORMAT_VERSION and record.get("key") == key:
                with self._lock:
                    self._memory[key] = record
                    self._hits += 1
                logger.info("Lattice cache hit for %s", record.get("group"))
                return record
        with self._lock:
            self._misses += 1
        return None

    def set(self, key: str, record: Dict[str, Any]) -> None:
        """
        Store a lattice record in memory and, if configured, on disk

        The file is written to a temporary name in the same directory and
        renamed into place.
        """
        if not self.enabled:
            return
        record = dict(record, version=FORMAT_VERSION, key=key)
        with self._lock:
            self._memory[key] = record
        path = self._path(key)
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".lattice-", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(record, f, separators=(",", ":"))
            os.replace(tmp, path)
        except OSError as e:
            logger.warning("Could not write lattice cache file %s: %s", path, e)

    def delete(self, key: str) -> bool:
        with self._lock:
            found = self._memory.pop(key, None) is not None
        path = self._path(key)
        if path is not None and path.exists():
            path.unlink()
            found = True
        return found

    def clear(self) -> None:
        """Clear the in-memory records"""
        with self._lock:
            self._memory.clear()

    def get_stats(self) -> dict:
        with self._lock:
            return {
                "entries": len(self._memory),
                "hits": self._hits,
                "misses": self._misses,
                "directory": str(self.directory) if self.directory else None,
                "enabled": self.enabled,
            }


# Global cache instance
_global_cache: Optional[LatticeCache] = None
_global_lock = Lock()


def get_lattice_cache(directory: Optional[Path] = None, enabled: bool = True) -> LatticeCache:
    """
    Get the global lattice cache

    The first call fixes the directory; later calls return the same instance.
    """
    global _global_cache
    with _global_lock:
        if _global_cache is None:
            _global_cache = LatticeCache(directory, enabled)
        return _global_cache


def reset_lattice_cache() -> None:
    global _global_cache
    with _global_lock:
        _global_cache = None
