"""On-disk cache for point counts and extracted coefficients.

One JSON file per kind (``surface.json``, ``curve-x.json``, ``gpair.json``)
holding ``{"version": 1, "entries": {key: {"key", "value", "version"}}}``.
Values are integers or integer pairs only.  Writes take an exclusive lock
and replace the file atomically; a corrupt entry is recomputed.
"""
from __future__ import annotations

import json
import logging
import os
import random
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from filelock import FileLock

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENV_VAR = "BOXZETA_CACHE"
_TOKEN = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class CacheKey:
    kind: str
    p: int
    degree: int = 1
    method: str = "fast"
    conventions: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        for tok in (self.kind, self.method, *(x for kv in self.conventions for x in kv)):
            if not _TOKEN.match(tok):
                raise ValueError(f"cache key component {tok!r} must match {_TOKEN.pattern}")

    def canonical(self) -> str:
        conv = ",".join(f"{k}={v}" for k, v in sorted(self.conventions))
        return f"{self.kind}|p={self.p}|deg={self.degree}|method={self.method}|conv={conv}"

    @classmethod
    def parse(cls, text: str) -> "CacheKey":
        kind, p, deg, method, conv = text.split("|")
        pairs = tuple(tuple(kv.split("=", 1)) for kv in conv[5:].split(",") if kv)
        return cls(kind, int(p[2:]), int(deg[4:]), method[7:], pairs)


def _valid_value(v) -> bool:
    if isinstance(v, bool):
        return False
    if isinstance(v, int):
        return True
    return isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in v)


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "boxzeta"


class Store:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, kind: str) -> Path:
        return self.directory / f"{kind}.json"

    def _read(self, kind: str) -> dict:
        path = self._path(kind)
        if not path.exists():
            return {}
        try:
            doc = json.loads(path.read_text())
            entries = doc["entries"]
            if not isinstance(entries, dict):
                raise TypeError("entries is not an object")
            return entries
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("cache file %s is unreadable (%s); ignoring it", path, exc)
            return {}

    def lookup(self, key: CacheKey):
        text = key.canonical()
        entry = self._read(key.kind).get(text)
        if entry is None:
            return None
        if (not isinstance(entry, dict) or entry.get("key") != text
                or entry.get("version") != FORMAT_VERSION or not _valid_value(entry.get("value"))):
            log.warning("corrupt cache entry %s in %s; recomputing", text, self._path(key.kind))
            return None
        return entry["value"]

    def put(self, key: CacheKey, value) -> None:
        if isinstance(value, tuple):
            value = list(value)
        if not _valid_value(value):
            raise TypeError(f"only integers or integer pairs are cached, got {value!r}")
        path = self._path(key.kind)
        with FileLock(str(path) + ".lock"):
            entries = self._read(key.kind)
            text = key.canonical()
            entries[text] = {"key": text, "value": value, "version": FORMAT_VERSION}
            doc = {"version": FORMAT_VERSION, "entries": dict(sorted(entries.items()))}
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=f".{key.kind}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(doc, fh, indent=1, sort_keys=True)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def get_or_compute(self, key: CacheKey, compute: Callable[[], object]):
        hit = self.lookup(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value)
        return self.lookup(key)

    def keys(self, kind: str) -> list[CacheKey]:
        return [CacheKey.parse(k) for k in sorted(self._read(kind))]

    def integrity_sweep(self, kind: str, k: int = 3, seed: int = 0,
                        recompute: Callable[[CacheKey], object] | None = None) -> dict[str, bool]:
        """Recompute up to k random entries of one kind and compare."""
        recompute = recompute or compute_for_key
        keys = self.keys(kind)
        sample = random.Random(seed).sample(keys, min(k, len(keys)))
        out = {}
        for key in sample:
            fresh = recompute(key)
            fresh = list(fresh) if isinstance(fresh, tuple) else fresh
            out[key.canonical()] = self.lookup(key) == fresh
        return out


def compute_for_key(key: CacheKey):
    """Recompute a cached value from its key alone."""
    from .cmforms import extract_g_pair
    from .counting import count_curve_X, count_surface_brute, count_surface_fast

    if key.kind == "surface":
        fn = count_surface_brute if key.method == "brute" else count_surface_fast
        return fn(key.p).count
    if key.kind == "curve-x":
        return count_curve_X(key.p, key.degree).count
    if key.kind == "gpair":
        return list(extract_g_pair(key.p).as_re_im())
    raise ValueError(f"no recompute rule for cache kind {key.kind!r}")
