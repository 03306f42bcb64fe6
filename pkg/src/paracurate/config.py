"""Process-level settings for the task managers and the HTTP service.

Domain configuration (language writing directions) lives in the ``config``
document collection; the knobs here govern the running process and can be
overridden from a JSON file via the CLI's ``--config`` flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import timedelta
from pathlib import Path

from .errors import FormatError


@dataclass(frozen=True)
class SystemConfig:
    lease_period_hours: float = 48.0
    manager_period_seconds: float = 60.0
    token_ttl_days: float = 7.0

    @property
    def lease_period(self) -> timedelta:
        return timedelta(hours=self.lease_period_hours)

    @property
    def token_ttl(self) -> timedelta:
        return timedelta(days=self.token_ttl_days)


def load_config(path: str | Path | None) -> SystemConfig:
    """Build a SystemConfig, overlaying fields from a JSON file when given."""
    config = SystemConfig()
    if path is None:
        return config
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise FormatError(f"config file {path} must hold a JSON object")
    known = {f for f in SystemConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise FormatError(f"unknown config keys: {sorted(unknown)}")
    return replace(config, **raw)
