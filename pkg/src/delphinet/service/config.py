"""Service configuration: defaults, an optional YAML file, and env overrides.

Precedence (highest wins): environment variables > config file > defaults.
Every setting has an ``DELPHINET_<NAME>`` environment variable; the config
file uses the same names in lowercase.  The file path itself comes from
``DELPHINET_CONFIG`` or the ``--config`` flag of the server runner.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..errors import NetworkFormatError, OutOfRangeError

ENV_PREFIX = "DELPHINET_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8444
    data_dir: str = "./delphinet-data"
    session_ttl_seconds: int = 8 * 3600
    snapshot_interval: int = 50
    #: Total-CPT-cell bound above which evaluations are refused with a
    #: resource-limit error instead of stalling the group.
    max_table_cells: int = 2**22
    bootstrap_admin: str = "admin"
    bootstrap_password: str = ""
    notifier: str = "log"

    def resolved_data_dir(self) -> Path:
        return Path(self.data_dir).expanduser()


_INT_FIELDS = {
    "port",
    "session_ttl_seconds",
    "snapshot_interval",
    "max_table_cells",
}


def _coerce(name: str, value: Any) -> Any:
    if name in _INT_FIELDS:
        try:
            value = int(value)
        except (TypeError, ValueError) as exc:
            raise OutOfRangeError(f"config value {name!r} must be an integer") from exc
        if value <= 0:
            raise OutOfRangeError(f"config value {name!r} must be positive")
        return value
    return str(value)


def _file_settings(path: str | Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkFormatError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise NetworkFormatError(f"config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise NetworkFormatError(f"config file {path} must contain a mapping")
    return dict(doc)


def load_config(
    path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
) -> ServiceConfig:
    """Build the effective configuration (env > file > defaults)."""
    env = os.environ if env is None else env
    if path is None:
        path = env.get(ENV_PREFIX + "CONFIG") or None

    names = {field.name for field in dataclasses.fields(ServiceConfig)}
    settings: dict[str, Any] = {}

    if path is not None:
        for key, value in _file_settings(path).items():
            if key not in names:
                raise NetworkFormatError(f"unknown config setting {key!r}")
            settings[key] = _coerce(key, value)

    for name in names:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            settings[name] = _coerce(name, raw)

    return ServiceConfig(**settings)
