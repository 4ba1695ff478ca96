"""Runtime configuration.

Precedence, lowest first: defaults, environment (``HYPERCURVES_*``, nested
keys with ``__``, also read from ``.env``), a ``--config`` JSON file, and
command-line flags.
"""

from pathlib import Path
from typing import Any, Dict, Optional
import json
import logging

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from .base import ParseError

logger = logging.getLogger(__name__)


class SieveSettings(BaseModel):
    prime_count: int = Field(5, ge=1)
    prime_min: int = Field(1000, ge=3)
    prime_max: int = Field(10000, ge=3)
    bound: int = Field(10, ge=1)
    support: int = Field(3, ge=1)
    op_budget: int = Field(10 ** 8, ge=1)
    classes: str = Field("r", pattern="^(eps|r)$")


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="HYPERCURVES_",
        env_nested_delimiter="__",
        env_file=".env",
        extra="ignore",
    )

    seed: int = Field(0, ge=0, lt=1 << 64)
    height: int = Field(50, ge=1)
    max_retries: int = Field(32, ge=1)
    max_cyclotomic_prime: int = Field(31, ge=3)
    jobs: int = Field(1, ge=1)
    out: Optional[Path] = None
    sieve: SieveSettings = Field(default_factory=SieveSettings)


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        elif value is not None:
            merged[key] = value
    return merged


def _validation_error(e: ValidationError, source: str) -> ParseError:
    first = e.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return ParseError(f"Invalid configuration in {source} at {location}: {first['msg']}", {"location": location, "source": source})


def load_settings(config_path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Build settings from env, an optional JSON file and flag overrides.

    ``None`` values in ``overrides`` mean "flag not given".

    Raises:
        ParseError: Unreadable or invalid config file, or invalid values
    """
    try:
        base = Settings().model_dump()
    except ValidationError as e:
        raise _validation_error(e, "environment")

    if config_path is not None:
        try:
            file_values = json.loads(Path(config_path).read_text())
        except OSError as e:
            raise ParseError(f"Cannot read config {config_path}: {e}", {"location": str(config_path)})
        except json.JSONDecodeError as e:
            raise ParseError(
                f"Malformed config {config_path}: {e.msg}",
                {"location": f"{config_path}:{e.lineno}:{e.colno}"},
            )
        if not isinstance(file_values, dict):
            raise ParseError(f"Config {config_path} must be a JSON object", {"location": str(config_path)})
        base = _merge(base, file_values)

    base = _merge(base, overrides or {})
    try:
        settings = Settings.model_validate(base)
    except ValidationError as e:
        raise _validation_error(e, str(config_path) if config_path else "flags")
    logger.debug(f"Settings: {settings.model_dump_json()}")
    return settings


# Global settings instance
_settings_instance: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create global Settings instance"""
    global _settings_instance

    if _settings_instance is None:
        _settings_instance = load_settings()

    return _settings_instance


def set_settings(settings: Optional[Settings]) -> None:
    global _settings_instance
    _settings_instance = settings
