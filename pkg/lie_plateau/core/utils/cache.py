"""
Manifest Caching System for LiePlateau

Keeps DLA manifests on disk so repeated (setup, n) runs skip the closure and decomposition.
Uses JSON format so cached manifests stay readable and portable.
"""
import hashlib
import json
import os
import tempfile
import time
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from filelock import FileLock

from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import record_cache_hit, record_cache_miss

logger = get_logger(__name__)


class ManifestCache:
    """
    Disk-backed cache of DLA manifests.

    Evicts the least recently accessed entry once max_cache_size is reached.
    """

    def __init__(self, cache_dir: str = "./data/cache", max_cache_size: int = 256):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.max_cache_size = max_cache_size
        self.cache_file = self.cache_dir / "manifest_cache.json"
        self.metadata_file = self.cache_dir / "cache_metadata.json"
        self.lock = FileLock(str(self.cache_dir / "manifest_cache.lock"))

        # Load existing cache
        self.cache = self._load_json(self.cache_file, {})
        self.metadata = self._load_json(self.metadata_file, {"access_times": {}, "creation_times": {}})

        logger.info(f"Manifest cache initialized with {len(self.cache)} entries")

    def _load_json(self, path: Path, default: Dict) -> Dict:
        try:
            if path.exists():
                with open(path, "r", encoding="utf-8") as f:
                    return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Failed to load {path.name}: {e}")
        return default

    def _write_atomic(self, path: Path, payload: Dict):
        fd, tmp = tempfile.mkstemp(dir=str(self.cache_dir), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(payload, f)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def _save_cache(self):
        """Save cache and metadata to disk under the file lock"""
        try:
            with self.lock:
                self._write_atomic(self.cache_file, self.cache)
                self._write_atomic(self.metadata_file, self.metadata)
        except OSError as e:
            logger.error(f"Failed to save manifest cache: {e}")

    @staticmethod
    def make_key(generators: Iterable[str], n: int, dim_cap: Optional[int]) -> str:
        """
        SHA256 of the canonical generator list plus n and dim_cap.

        Generator order does not matter for the closure, so the strings are sorted first.
        """
        canonical = "|".join(sorted(str(g).strip().upper() for g in generators))
        cache_input = f"{n}_{dim_cap}_{canonical}"
        return hashlib.sha256(cache_input.encode()).hexdigest()

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """Get cached manifest if available"""
        if key in self.cache:
            self.metadata["access_times"][key] = time.time()
            record_cache_hit()
            logger.debug(f"Manifest cache hit: {key[:12]}")
            return self.cache[key]

        record_cache_miss()
        logger.debug(f"Manifest cache miss: {key[:12]}")
        return None

    def set(self, key: str, manifest: Dict[str, Any]):
        """Cache a manifest; truncated closures are not worth keeping"""
        if manifest.get("truncated"):
            return

        if key not in self.cache and len(self.cache) >= self.max_cache_size:
            self._evict_oldest()

        self.cache[key] = manifest
        current_time = time.time()
        self.metadata["creation_times"][key] = current_time
        self.metadata["access_times"][key] = current_time
        self._save_cache()

    def _evict_oldest(self):
        """Evict oldest accessed entry"""
        if not self.metadata["access_times"]:
            return

        oldest_key = min(self.metadata["access_times"], key=self.metadata["access_times"].get)
        self.cache.pop(oldest_key, None)
        self.metadata["access_times"].pop(oldest_key, None)
        self.metadata["creation_times"].pop(oldest_key, None)

        logger.debug(f"Evicted manifest {oldest_key[:12]}")

    def clear(self):
        """Clear all cache"""
        self.cache.clear()
        self.metadata = {"access_times": {}, "creation_times": {}}

        try:
            for path in (self.cache_file, self.metadata_file):
                if path.exists():
                    path.unlink()
        except OSError as e:
            logger.warning(f"Failed to remove cache files: {e}")

        logger.info("Manifest cache cleared")

    def get_stats(self) -> Dict:
        """Get cache statistics"""
        creation = self.metadata["creation_times"]
        return {
            "total_entries": len(self.cache),
            "max_size": self.max_cache_size,
            "cache_dir": str(self.cache_dir),
            "oldest_entry": min(creation.values()) if creation else None,
            "newest_entry": max(creation.values()) if creation else None,
        }
