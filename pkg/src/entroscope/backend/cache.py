"""Deterministic response cache wrapping any backend.

Keys are SHA-256 hashes of the prompt plus decoding parameters, so warm
re-runs of a pipeline issue zero backend calls for completed passes. Entries
live in memory and, when a directory is configured, as one JSON file per key
written atomically for crash-safe resume.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from .types import DecodingParams, Generation


def generation_key(prompt: str, params: DecodingParams) -> str:
    payload = json.dumps(
        {"kind": "generate", "prompt": prompt, "params": params.to_jsonable()},
        sort_keys=True,
        ensure_ascii=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def score_key(prompt: str, response_tokens: list[str]) -> str:
    payload = json.dumps(
        {"kind": "score", "prompt": prompt, "tokens": response_tokens},
        sort_keys=True,
        ensure_ascii=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CachingBackend:
    """Backend decorator adding keyed memoization of generate/score calls."""

    def __init__(self, inner, cache_dir: str | Path | None = None):
        self.inner = inner
        self.cache_dir = Path(cache_dir) if cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._memory: dict[str, dict] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _load(self, key: str) -> dict | None:
        with self._lock:
            if key in self._memory:
                return self._memory[key]
        if self.cache_dir:
            path = self.cache_dir / f"{key}.json"
            if path.exists():
                entry = json.loads(path.read_text(encoding="utf-8"))
                with self._lock:
                    self._memory[key] = entry
                return entry
        return None

    def _store(self, key: str, entry: dict) -> None:
        with self._lock:
            self._memory[key] = entry
        if self.cache_dir:
            path = self.cache_dir / f"{key}.json"
            fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(entry, fh)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def generate(self, prompt: str, params: DecodingParams) -> Generation:
        key = generation_key(prompt, params)
        entry = self._load(key)
        if entry is not None:
            self.hits += 1
            return Generation.from_jsonable(entry)
        self.misses += 1
        generation = self.inner.generate(prompt, params)
        self._store(key, generation.to_jsonable())
        return generation

    def score_response(self, prompt: str, response_tokens: list[str]) -> list[float]:
        key = score_key(prompt, response_tokens)
        entry = self._load(key)
        if entry is not None:
            self.hits += 1
            return list(entry["logprobs"])
        self.misses += 1
        logprobs = self.inner.score_response(prompt, response_tokens)
        self._store(key, {"logprobs": list(logprobs)})
        return logprobs
