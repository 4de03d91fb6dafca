"""Service configuration: dataclass defaults, YAML file, env overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from ..guard.scoring import DEFAULT_THRESHOLD

ENV_PREFIX = "PAPERLOOP_"

DEFAULT_PANEL = ("model-a", "model-b", "model-c", "model-d", "model-e")


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path = Path("data")
    host: str = "127.0.0.1"
    port: int = 8571
    panel_models: tuple[str, ...] = DEFAULT_PANEL
    review_model: str = "model-a"
    semantic_model: str = "guard-semantic"
    backend: str = "scripted"  # scripted | fixture | http
    fixtures_dir: str | None = None
    http_base_url: str | None = None
    http_api_key: str | None = None
    scan_threshold: float = DEFAULT_THRESHOLD
    scan_semantic: bool = False
    auto_review_on_submit: bool = True
    auto_rereview: bool = True
    page_size: int = 10
    max_body_bytes: int = 2_000_000
    api_key: str | None = None  # optional X-API-Key slot; None disables the check

    def validate(self) -> "ServiceConfig":
        if self.backend not in ("scripted", "fixture", "http"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "fixture":
            if not self.fixtures_dir or not Path(self.fixtures_dir).is_dir():
                raise ValueError("fixture backend requires an existing fixtures_dir")
        if self.backend == "http" and not self.http_base_url:
            raise ValueError("http backend requires http_base_url")
        if len(set(self.panel_models)) != 5:
            raise ValueError("panel_models must name five distinct models")
        if self.page_size < 1:
            raise ValueError("page_size must be positive")
        return self


_CASTS = {
    "data_dir": Path,
    "port": int,
    "panel_models": lambda v: tuple(v.split(",")) if isinstance(v, str) else tuple(v),
    "scan_threshold": float,
    "scan_semantic": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "auto_review_on_submit": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "auto_rereview": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
    "page_size": int,
    "max_body_bytes": int,
}


def load_config(
    path: str | Path | None = None, env: dict[str, str] | None = None
) -> ServiceConfig:
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(loaded, dict):
            raise ValueError("config file must contain a mapping")
        values.update(loaded)
    for f in fields(ServiceConfig):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            values[f.name] = env[key]
    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for name, cast in _CASTS.items():
        if name in values and values[name] is not None:
            values[name] = cast(values[name])
    return replace(ServiceConfig(), **values).validate()
