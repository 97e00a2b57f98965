#!/usr/bin/env python3
"""Run configuration: budgets, workers and output settings.

Values are layered: defaults, then ~/.hurwitz_components.json, then
HURWITZ_* environment variables, then command-line flags.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from hurwitz_errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 5_000_000
DEFAULT_GROUP_BUDGET = 5000
DEFAULT_PARALLEL_THRESHOLD = 50_000
CONFIG_FILE = "~/.hurwitz_components.json"

ENV_VARS = {
    "state_budget": "HURWITZ_STATE_BUDGET",
    "group_budget": "HURWITZ_GROUP_BUDGET",
    "worker_count": "HURWITZ_WORKERS",
    "verbosity": "HURWITZ_VERBOSITY",
}

OUTPUT_FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    state_budget: int = DEFAULT_STATE_BUDGET
    group_budget: int = DEFAULT_GROUP_BUDGET
    worker_count: int = 1
    parallel_threshold: int = DEFAULT_PARALLEL_THRESHOLD
    output_format: str = "json"
    output_path: Optional[str] = None
    verbosity: int = 1

    def __post_init__(self):
        if self.state_budget <= 0:
            raise ConfigError("state_budget must be positive", {"state_budget": self.state_budget})
        if self.group_budget <= 0:
            raise ConfigError("group_budget must be positive", {"group_budget": self.group_budget})
        if self.worker_count < 1:
            raise ConfigError("worker_count must be at least 1", {"worker_count": self.worker_count})
        if self.parallel_threshold < 0:
            raise ConfigError("parallel_threshold must be non-negative",
                              {"parallel_threshold": self.parallel_threshold})
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown output format '{self.output_format}'",
                              {"output_format": self.output_format})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(name: str, raw: Any, source: str) -> Any:
    if name in ("output_format",):
        return str(raw).strip().lower()
    if name == "output_path":
        return None if raw in (None, "") else str(raw)
    try:
        return int(str(raw).strip())
    except ValueError as exc:
        raise ConfigError(f"Invalid integer for {name} in {source}", {"value": raw, "source": source}) from exc


def config_file_path(environ: Optional[Mapping[str, str]] = None) -> Path:
    environ = os.environ if environ is None else environ
    return Path(os.path.expanduser(environ.get("HURWITZ_CONFIG", CONFIG_FILE)))


def _load_file_settings(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Failed to read config file {path}", {"path": str(path)}) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object", {"path": str(path)})

    known = {f.name for f in fields(RunConfig)}
    settings = {}
    for key, value in data.items():
        if key not in known:
            logger.warning(f"Ignoring unknown config key '{key}' in {path}")
            continue
        settings[key] = _coerce(key, value, str(path))
    return settings


def _load_env_settings(environ: Mapping[str, str]) -> Dict[str, Any]:
    settings = {}
    for name, var in ENV_VARS.items():
        raw = environ.get(var)
        if raw is None or raw.strip() == "":
            continue
        settings[name] = _coerce(name, raw, var)
    return settings


def load_run_config(overrides: Optional[Dict[str, Any]] = None,
                    environ: Optional[Mapping[str, str]] = None,
                    path: Optional[Path] = None) -> RunConfig:
    """Build a RunConfig from file, environment and explicit overrides"""
    environ = os.environ if environ is None else environ
    path = config_file_path(environ) if path is None else path

    settings: Dict[str, Any] = {}
    settings.update(_load_file_settings(path))
    settings.update(_load_env_settings(environ))
    for key, value in (overrides or {}).items():
        if value is not None:
            settings[key] = value

    config = replace(RunConfig(), **settings)
    logger.debug(f"Run configuration: {config.to_dict()}")
    return config
