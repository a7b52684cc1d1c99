"""Run-time configuration: size caps, step limits, cache location."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path


def _default_cache_dir() -> Path:
    env = os.environ.get("EXPLORABLE_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "explorable"


@dataclass(frozen=True)
class Config:
    graph_cap: int = 5  # largest size in the all-graphs enumeration
    tree_cap: int = 7  # largest size in the all-trees enumeration
    uxs_cap: int = 4  # largest N for which R(N) replays a verified UXS
    step_limit: int = 1_000_000
    build_limit: int = 20_000  # largest j for which D_j may be built by the refuter
    cache_dir: Path = field(default_factory=_default_cache_dir)
    use_disk_cache: bool = True

    def __post_init__(self):
        for name in ("graph_cap", "tree_cap", "uxs_cap", "step_limit", "build_limit"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


_config = Config()


def get_config() -> Config:
    return _config


def set_config(**changes) -> Config:
    """Replace fields of the process-wide configuration and return it."""
    global _config
    _config = replace(_config, **changes)
    return _config
