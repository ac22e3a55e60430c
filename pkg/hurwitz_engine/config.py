"""
Central configuration for HurwitzForge.

This wraps the YAML config (config/config.yaml) and environment variables
into a single Settings object used by the services, the tools and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional
import logging
import os

import yaml

from .utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_RELATIVE_PATH = "config/config.yaml"

DEFAULTS: Dict[str, Any] = {
    "logging": {"level": "INFO"},
    "budget": {
        "max_group_order": 1200,
        "max_lattice_size": 5000,
        "max_orbit_size": 200000,
        "max_full_length": 24,
        "element_cache_limit": 2000000,
    },
    "cache": {"enabled": True, "directory": ".hurwitz_cache"},
    "verification": {
        "workers": 4,
        "float_tolerance": 1.0e-9,
        "h3_tolerance": 1.0e-6,
    },
    "presets": {"enable_f4": False},
    "output": {"format": "json"},
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass
class Settings:
    """
    Application settings loaded from YAML plus environment variables.

    Attributes:
        project_root: Root directory of the project (repository root).
        config: Parsed YAML configuration merged over the built-in defaults.
        environment: Logical environment name (e.g. "dev", "ci", "production").
        log_level: Logging level string (DEBUG/INFO/WARNING/ERROR).
        cache_override: Cache directory taken from HURWITZ_CACHE_DIR, if set.
        source_path: Config file that was read or looked for.
    """

    project_root: Path
    config: Dict[str, Any] = field(default_factory=lambda: _merge(DEFAULTS, {}))
    environment: str = "production"
    log_level: str = "INFO"
    cache_override: Optional[Path] = None
    source_path: Optional[Path] = None

    def _section(self, name: str) -> Dict[str, Any]:
        return self.config.get(name, {}) or {}

    @property
    def max_group_order(self) -> int:
        """Element ceiling for any enumerated group."""
        return int(self._section("budget").get("max_group_order", 1200))

    @property
    def max_lattice_size(self) -> int:
        return int(self._section("budget").get("max_lattice_size", 5000))

    @property
    def max_orbit_size(self) -> int:
        return int(self._section("budget").get("max_orbit_size", 200000))

    @property
    def max_full_length(self) -> int:
        """Longest factorization length tried by the full-length oracle."""
        return int(self._section("budget").get("max_full_length", 24))

    @property
    def element_cache_limit(self) -> int:
        return int(self._section("budget").get("element_cache_limit", 2000000))

    @property
    def cache_enabled(self) -> bool:
        if os.getenv("HURWITZ_CACHE_DISABLED") == "1":
            return False
        return bool(self._section("cache").get("enabled", True))

    @property
    def cache_dir(self) -> Path:
        """Directory holding persisted subgroup lattices."""
        if self.cache_override is not None:
            return self.cache_override
        directory = Path(self._section("cache").get("directory", ".hurwitz_cache"))
        if not directory.is_absolute():
            directory = self.project_root / directory
        return directory

    @property
    def workers(self) -> int:
        return max(1, int(self._section("verification").get("workers", 4)))

    @property
    def float_tolerance(self) -> float:
        return float(self._section("verification").get("float_tolerance", 1.0e-9))

    @property
    def h3_tolerance(self) -> float:
        return float(self._section("verification").get("h3_tolerance", 1.0e-6))

    @property
    def enable_f4(self) -> bool:
        return bool(self._section("presets").get("enable_f4", False))

    @property
    def output_format(self) -> str:
        return str(self._section("output").get("format", "json"))

    @property
    def config_path(self) -> Path:
        """Resolved path to the YAML config file in use."""
        if self.source_path is not None:
            return self.source_path
        return self.project_root / DEFAULT_CONFIG_RELATIVE_PATH

    @classmethod
    def load(
        cls,
        project_root: Optional[str] = None,
        config_path: Optional[str] = None,
    ) -> "Settings":
        """
        Load settings from YAML and environment variables.

        Precedence:
        1. Function arguments (project_root/config_path)
        2. Environment variables (HURWITZ_*)
        3. Defaults based on the location of this file.
        """
        if project_root:
            root = Path(project_root).resolve()
        else:
            # hurwitz_engine/ is one level below repo root
            root = Path(__file__).resolve().parent.parent

        config_path = config_path or os.getenv("HURWITZ_CONFIG")
        if config_path:
            cfg_path = Path(config_path).resolve()
            if not cfg_path.exists():
                raise ConfigurationError(f"Configuration file not found: {cfg_path}")
        else:
            cfg_path = root / DEFAULT_CONFIG_RELATIVE_PATH

        raw_cfg: Dict[str, Any] = {}
        if cfg_path.exists():
            try:
                with cfg_path.open("r", encoding="utf-8") as f:
                    raw_cfg = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Invalid YAML in {cfg_path}: {e}") from e
            if not isinstance(raw_cfg, dict):
                raise ConfigurationError(f"Top level of {cfg_path} must be a mapping")
        else:
            logger.debug("No configuration file at %s, using defaults", cfg_path)

        environment = os.getenv("HURWITZ_ENV", "production")

        log_level = (
            os.getenv("HURWITZ_LOG_LEVEL")
            or (raw_cfg.get("logging", {}) or {}).get("level", "INFO")
        )

        cache_env = os.getenv("HURWITZ_CACHE_DIR")

        return cls(
            project_root=root,
            config=_merge(DEFAULTS, raw_cfg),
            environment=environment,
            log_level=log_level,
            cache_override=Path(cache_env).resolve() if cache_env else None,
            source_path=cfg_path,
        )
