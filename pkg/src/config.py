"""
Configuration Management Module

Loads default settings from config.yaml and validates per-run settings.

Config
    The YAML file: ``defaults`` (prime, method, guard, ...), ``logging`` and
    ``fuzz`` sections, with dotted-key access.
RunConfig
    The validated settings of one command. Built by merging file defaults
    with command-line flags; flags win. Nothing is read from the environment.
"""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator
from sympy import isprime

from utils.error_handler import ConfigurationError

REQUIRED_SECTIONS = ('defaults', 'logging', 'fuzz')
METHODS = ('homology', 'skein', 'both')
OUTPUT_FORMATS = ('text', 'json')


class Config:
    """
    Configuration manager for config.yaml.

    Attributes:
        config_path (Path): Path to the YAML file
        _config (Dict[str, Any]): Loaded configuration dictionary
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path (str, optional): Path to config file. Defaults to project root config.yaml
        """
        if config_path is None:
            self.config_path = Path(__file__).parent.parent / "config.yaml"
        else:
            self.config_path = Path(config_path)

        self._config: Dict[str, Any] = {}
        self.load()

    def load(self) -> None:
        """
        Load configuration from the YAML file with validation.

        Raises:
            ConfigurationError: file missing, malformed, or lacking a required section
        """
        if not self.config_path.exists():
            raise ConfigurationError(f"Configuration file not found: {self.config_path}",
                                     config_key=str(self.config_path))

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                self._config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Failed to load YAML config: {e}",
                                     config_key=str(self.config_path)) from e

        if not isinstance(self._config, dict):
            raise ConfigurationError("Configuration root must be a mapping")

        missing = [s for s in REQUIRED_SECTIONS if not isinstance(self._config.get(s), dict)]
        if missing:
            raise ConfigurationError(
                f"Missing required configuration sections: {', '.join(missing)}. "
                f"Please add these to {self.config_path}",
                config_key=missing[0],
            )

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by key.

        Example:
            >>> config.get("defaults.p")
            5
            >>> config.get("fuzz.cases")
            100
        """
        value = self._config
        for k in key.split('.'):
            if isinstance(value, dict):
                value = value.get(k)
                if value is None:
                    return default
            else:
                return default
        return value

    @property
    def defaults(self) -> Dict[str, Any]:
        return dict(self._config.get('defaults', {}))

    @property
    def fuzz(self) -> Dict[str, Any]:
        return dict(self._config.get('fuzz', {}))

    @property
    def prime(self) -> int:
        return self.get("defaults.p", 5)

    @property
    def guard(self) -> int:
        """Maximum total cable width."""
        return self.get("defaults.guard", 14)

    @property
    def verify_primes(self):
        primes = list(self.get("defaults.verify_primes", [5, 7, 11, 13]))
        if not primes:
            raise ConfigurationError("defaults.verify_primes is empty",
                                     config_key="defaults.verify_primes")
        return primes

    @property
    def log_level(self) -> str:
        return self.get("logging.level", "WARNING")

    @property
    def log_dir(self) -> Optional[str]:
        """Directory for JSON log files; None disables file logging."""
        return self.get("logging.dir")

    @property
    def log_json(self) -> bool:
        return self.get("logging.json", True)

    @property
    def failure_log(self) -> str:
        return self.get("fuzz.failure_log", "logs/fuzz_failures.jsonl")


_config_instance: Optional[Config] = None


def get_config(config_path: Optional[str] = None) -> Config:
    """Get or create the global config instance."""
    global _config_instance
    if _config_instance is None or config_path is not None:
        _config_instance = Config(config_path)
    return _config_instance


class RunConfig(BaseModel):
    """Validated settings of one command run."""

    p: int = Field(5, description="Odd prime >= 5 selecting the root of unity")
    method: Optional[str] = Field(None, description="homology, skein or both; None picks by Euler characteristic")
    guard: int = Field(14, description="Maximum total cable width")
    seed: int = Field(0, description="Fuzz seed")
    cases: int = Field(100, ge=0, description="Fuzz case count")
    moves: int = Field(20, ge=0, description="AC moves per fuzz case")
    workers: int = Field(1, description="Worker threads")
    output_format: str = Field('text', description="text or json")
    timing: bool = Field(False, description="Include timing in JSON reports")
    fold_root: bool = Field(False, description="Fold a formal X into RTW values when possible")
    cache_dir: Optional[str] = Field(None, description="Directory for the persistent Jones-Wenzl cache")

    @field_validator('p')
    def validate_prime(cls, v):
        if v < 5 or not isprime(v):
            raise ValueError("p must be a prime >= 5")
        return v

    @field_validator('method')
    def validate_method(cls, v):
        if v is not None and v not in METHODS:
            raise ValueError(f"method must be one of {list(METHODS)}")
        return v

    @field_validator('guard')
    def validate_guard(cls, v):
        if v < 2:
            raise ValueError("guard must be at least 2")
        return v

    @field_validator('workers')
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v

    @field_validator('output_format')
    def validate_output_format(cls, v):
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {list(OUTPUT_FORMATS)}")
        return v

    @classmethod
    def from_sources(cls, config: Optional[Config] = None, **flags) -> 'RunConfig':
        """
        Merge file defaults with flags; flags that are None are ignored.

        Raises:
            ConfigurationError: the merged settings do not validate
        """
        merged: Dict[str, Any] = {}
        if config is not None:
            merged.update({k: v for k, v in config.defaults.items() if k in cls.model_fields})
            merged.update({k: v for k, v in config.fuzz.items() if k in ('seed', 'cases', 'moves')})
        merged.update({k: v for k, v in flags.items() if v is not None})
        try:
            return cls(**merged)
        except ValidationError as e:
            first = e.errors()[0]
            key = '.'.join(str(x) for x in first.get('loc', ()))
            raise ConfigurationError(f"invalid setting {key}: {first.get('msg')}", config_key=key) from e
