"""HTTP service: REST API, sessions, and durable event-sourced storage."""

from __future__ import annotations

from .app import create_app
from .config import ServiceConfig, load_config
from .registry import ServiceRegistry

__all__ = ["ServiceConfig", "ServiceRegistry", "create_app", "load_config"]
