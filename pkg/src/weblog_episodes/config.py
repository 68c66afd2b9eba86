"""Configuration management for the mining tool."""

import os
from pathlib import Path
from typing import Any, TypeVar

import yaml
from pydantic import BaseModel, Field, ValidationError

from weblog_episodes.models import MiningConfig, TimestampFormat


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


class Config(BaseModel):
    """Process-wide settings, read from the environment when not given."""

    log_level: str | None = Field(default=None)
    timestamp_format: TimestampFormat | None = Field(default=None)
    delimiter: str = ","

    def __init__(self, **data: object) -> None:
        super().__init__(**data)

        if self.log_level is None:
            self.log_level = os.environ.get("WLE_LOG_LEVEL", "INFO").upper()
        if self.timestamp_format is None:
            self.timestamp_format = TimestampFormat(os.environ.get("WLE_TIMESTAMP_FORMAT", "auto"))


# Global config instance
_config: Config | None = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def set_config(config: Config) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config


# Config-file keys that map onto a differently named MiningConfig field
_KEY_ALIASES = {"n": "n_override", "min_confidence": "min_conf", "w": "window"}


def _normalize_key(key: str) -> str:
    key = key.strip().lower().replace("-", "_")
    return _KEY_ALIASES.get(key, key)


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Load run settings from a YAML or JSON file.

    Args:
        path: Path to the config file

    Returns:
        Mapping of normalized MiningConfig field names to raw values

    Raises:
        ConfigError: If the file is missing, unreadable or not a mapping
    """
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (yaml.YAMLError, UnicodeDecodeError) as e:
        raise ConfigError(f"Could not parse config file {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a mapping of settings")

    values = {_normalize_key(str(k)): v for k, v in data.items()}
    unknown = sorted(set(values) - set(MiningConfig.model_fields))
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return values


def resolve_mining_config(file_values: dict[str, Any] | None = None, **flags: Any) -> MiningConfig:
    """
    Merge config-file values with command-line flags.

    Flags that are not None take precedence over the file.

    Raises:
        ConfigError: If the merged values violate MiningConfig invariants
    """
    merged: dict[str, Any] = dict(file_values or {})
    merged.update({_normalize_key(k): v for k, v in flags.items() if v is not None})

    try:
        return MiningConfig(**merged)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"Invalid configuration: {problems}") from None


def _missing(name: str) -> ConfigError:
    flag = "--n" if name == "n_override" else f"--{name.replace('_', '-')}"
    return ConfigError(f"Missing required setting {flag} (flag or config file)")


def require_settings(config: MiningConfig, *names: str) -> None:
    """Raise ConfigError naming the first required threshold that is unset."""
    for name in names:
        if getattr(config, name) is None:
            raise _missing(name)


T = TypeVar("T")


def required(value: T | None, name: str) -> T:
    """
    Return a setting that must be present.

    Example:
        window = required(config.window, "window")

    Raises:
        ConfigError: If the value is unset
    """
    if value is None:
        raise _missing(name)
    return value
