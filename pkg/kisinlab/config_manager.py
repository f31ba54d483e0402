"""
Configuration manager
Loads kisinlab_config.json, validates it with a JSON schema and falls back to defaults
"""

import contextlib
import json
import logging
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import jsonschema

from .models import ErrorInfo
from .utils import find_project_root, print_progress

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = "kisinlab_config.json"

CONFIG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "working_precision": {"type": ["integer", "null"], "minimum": 1},
        "census_guard_bits": {"type": "integer", "minimum": 1, "maximum": 40},
        "hom_exhaust_limit": {"type": "integer", "minimum": 0, "maximum": 24},
        "max_workers": {"type": "integer", "minimum": 1},
        "random_seed": {"type": "integer"},
        "show_progress": {"type": "boolean"},
        "log_level": {"enum": ["DEBUG", "INFO", "WARNING", "ERROR"]},
        "log_file": {"type": ["string", "null"]},
        "output_dir": {"type": "string", "minLength": 1},
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class Settings:
    """Active configuration values"""
    working_precision: Optional[int] = None
    census_guard_bits: int = 24
    hom_exhaust_limit: int = 12
    max_workers: int = 4
    random_seed: int = 20240601
    show_progress: bool = True
    log_level: str = "INFO"
    log_file: Optional[str] = None
    output_dir: str = "./output"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_active = Settings()


def get_settings() -> Settings:
    """Settings used by library defaults"""
    return _active


def set_settings(settings: Settings) -> None:
    global _active
    _active = settings


@contextlib.contextmanager
def use_settings(**overrides: Any) -> Iterator[Settings]:
    """Temporarily override settings, e.g. ``with use_settings(show_progress=False)``"""
    previous = get_settings()
    updated = replace(previous, **overrides)
    set_settings(updated)
    try:
        yield updated
    finally:
        set_settings(previous)


class ConfigManager:
    """Configuration manager: load, validate, repair, save"""

    def __init__(self, silent: bool = False, project_root: Optional[Path] = None):
        self.silent = silent
        self.errors: List[ErrorInfo] = []
        self.project_root = project_root if project_root is not None else find_project_root()

    def config_path(self, config_path: Optional[str] = None) -> Path:
        return self.project_root / (config_path or CONFIG_FILE_NAME)

    def load_config(self, config_path: Optional[str] = None) -> Dict[str, Any]:
        """Load the JSON configuration, defaults when missing or invalid"""
        config_file = self.config_path(config_path)

        if not self.silent:
            print_progress(f"loading config: {config_file}")

        if not config_file.exists():
            logger.debug("no config file at %s, using defaults", config_file)
            return self.create_default_config()

        try:
            with open(config_file, "r", encoding="utf-8") as f:
                config = json.load(f)
        except json.JSONDecodeError as e:
            self.errors.append(ErrorInfo(
                code="config_parse_error",
                message=f"malformed config file: {e}",
                solution="defaults are used; fix or delete the file",
                severity="warning",
            ))
            return self.create_default_config()
        except OSError as e:
            self.errors.append(ErrorInfo(
                code="config_load_error",
                message=f"cannot read config file: {e}",
                solution="defaults are used",
                severity="warning",
            ))
            return self.create_default_config()

        if not self.validate_config(config):
            return self.repair_config(config)
        return {**self.create_default_config(), **config}

    def save_config(self, config: Dict[str, Any], config_path: Optional[str] = None) -> bool:
        """Write the configuration as indented JSON"""
        config_file = self.config_path(config_path)
        if not self.validate_config(config):
            return False
        try:
            with open(config_file, "w", encoding="utf-8") as f:
                json.dump(config, f, indent=2, ensure_ascii=False)
                f.write("\n")
            return True
        except OSError as e:
            self.errors.append(ErrorInfo(
                code="config_save_error",
                message=f"cannot save config: {e}",
                solution="check file permissions",
            ))
            return False

    def create_default_config(self) -> Dict[str, Any]:
        """Default configuration (not written to disk)"""
        return Settings().to_dict()

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Schema check; problems are recorded in ``errors``"""
        validator = jsonschema.Draft7Validator(CONFIG_SCHEMA)
        problems = sorted(validator.iter_errors(config), key=lambda e: list(e.path))
        for problem in problems:
            where = ".".join(str(p) for p in problem.path) or "<root>"
            self.errors.append(ErrorInfo(
                code="config_invalid_field",
                message=f"config {where}: {problem.message}",
                solution="the default value is used for this key",
                severity="warning",
            ))
        return not problems

    def repair_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """Keep every key that validates on its own, default the rest"""
        repaired = self.create_default_config()
        properties = CONFIG_SCHEMA["properties"]
        for key, value in config.items():
            if key not in properties:
                continue
            if jsonschema.Draft7Validator(properties[key]).is_valid(value):
                repaired[key] = value
        return repaired

    def load_settings(self, config_path: Optional[str] = None) -> Settings:
        """Load the file and turn it into a Settings record"""
        return Settings(**self.load_config(config_path))

    def get_errors(self) -> List[ErrorInfo]:
        return list(self.errors)

    def has_errors(self) -> bool:
        return len(self.errors) > 0
