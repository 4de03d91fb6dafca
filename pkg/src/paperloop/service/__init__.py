"""HTTP service, tool manifest, job model, and operator CLI."""

from .config import ServiceConfig, load_config

__all__ = ["ServiceConfig", "load_config"]
