"""Run configuration and the per-run session (budget, cache, statistics)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cosets import DEFAULT_BUDGET, Counter
from .errors import ParseError, PrecisionError
from .padic import PrecisionContext, is_prime
from .root_datum import RootDatum, parse_group

ENV_PREFIX = "HECKE_"


@dataclass(frozen=True)
class RunConfig:
    group: str = "PGL2"
    p: int = 5
    a: int = 1
    precision: int = 24
    budget: int = DEFAULT_BUDGET
    depth_max: int = 16
    cache_dir: str | None = None
    seed: int = 0
    format: str = "json"
    verify_depth: bool = False

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ParseError(f"p must be a prime >= 5, got {self.p}")
        if self.a < 1:
            raise ParseError("a must be >= 1")
        if self.precision < self.a + self.depth_max + 2:
            raise PrecisionError(
                f"precision {self.precision} < a + depth_max + 2 = {self.a + self.depth_max + 2}"
            )
        if self.format not in ("json", "table"):
            raise ParseError(f"unknown output format {self.format!r}")

    @property
    def datum(self) -> RootDatum:
        return parse_group(self.group)

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.p, self.precision, self.a)

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    @staticmethod
    def env_overrides(environ=None) -> dict:
        """Values taken from HECKE_* environment variables."""
        environ = os.environ if environ is None else environ
        casts = {
            "group": str, "p": int, "a": int, "precision": int, "budget": int,
            "depth_max": int, "cache_dir": str, "seed": int, "format": str,
        }
        out = {}
        for key, cast in casts.items():
            raw = environ.get(ENV_PREFIX + key.upper())
            if raw is not None:
                try:
                    out[key] = cast(raw)
                except ValueError as exc:
                    raise ParseError(f"bad value for {ENV_PREFIX}{key.upper()}: {raw!r}") from exc
        return out


@dataclass
class Session:
    """Mutable per-run state: memo tables, optional disk cache, statistics."""

    config: RunConfig = field(default_factory=RunConfig)
    cache: object | None = None
    memo: dict = field(default_factory=dict)
    stats: dict = field(default_factory=lambda: {"visited": 0, "cache_hits": 0, "cache_misses": 0})

    @staticmethod
    def open(config: RunConfig, use_cache: bool = True) -> "Session":
        cache = None
        if use_cache and config.cache_dir:
            from .cache import DiskCache

            cache = DiskCache(Path(config.cache_dir))
        return Session(config, cache)

    def counter(self) -> Counter:
        return Counter(self.config.budget)

    def note_visited(self, counter: Counter) -> None:
        self.stats["visited"] += counter.visited

    def lookup(self, key: tuple):
        if key in self.memo:
            self.stats["cache_hits"] += 1
            return self.memo[key]
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                self.stats["cache_hits"] += 1
                self.memo[key] = hit
                return hit
        self.stats["cache_misses"] += 1
        return None

    def store(self, key: tuple, value) -> None:
        self.memo[key] = value
        if self.cache is not None:
            self.cache.put(key, value)


_DEFAULT = None


def default_session() -> Session:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Session()
    return _DEFAULT
