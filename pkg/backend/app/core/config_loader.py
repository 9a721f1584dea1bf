"""
Config Loader - YAML configuration and scenario files

Loads YAML files with environment substitution and validates them into pydantic
models. Scenario files (`*.scn`) are YAML too: they are deep-merged over the
simulation defaults, then `--set key=value` overrides are applied, then the
result is validated as a ScenarioConfig.

Usage:
    >>> from app.core.config_loader import get_simulation_config, load_scenario
    >>>
    >>> defaults = get_simulation_config()
    >>> defaults.timers.tmp
    0.05
    >>>
    >>> scenario = load_scenario("config/scenarios/fig9.scn", ["strategy=self-learning"])
"""

import copy
import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigurationError
from app.schemas.scenario import BfdConfig, ConsumerConfig, ScenarioConfig, TimerConfig, WorkloadConfig

logger = logging.getLogger(__name__)

BACKEND_DIR = Path(__file__).parent.parent.parent


class LoggingConfig(BaseModel):
    """Logging settings"""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    datefmt: str = "%Y-%m-%d %H:%M:%S"
    max_log_size_mb: int = 100
    backup_count: int = 7
    log_dir: str = "logs"
    app_log: str = "app.log"
    quiet_loggers: List[str] = Field(default_factory=lambda: ["matplotlib", "numexpr"])


class OutputConfig(BaseModel):
    """CSV output settings"""
    directory: str = "results"
    float_format: str = "%.6f"


class BenchmarkConfig(BaseModel):
    """FIB microbenchmark defaults"""
    sizes: List[int] = Field(default_factory=lambda: [1_000, 10_000, 100_000])
    prefix_len: int = 50
    repetitions: int = 20
    batch: int = 100


class SweepConfig(BaseModel):
    """Default sweep values per experiment"""
    seeds: int = 20
    values: Dict[str, List[int]] = Field(default_factory=dict)


class ApplicationConfig(BaseModel):
    """Application settings (app.yaml)"""
    application: Dict[str, Any]
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    benchmark: BenchmarkConfig = Field(default_factory=BenchmarkConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)


class SimulationDefaults(BaseModel):
    """Scenario defaults (simulation.yaml)"""
    duration: float = 60.0
    link_delay: float = 0.01
    parallel_links: int = 1
    throughput_bin: float = 1.0
    workload: WorkloadConfig = Field(default_factory=WorkloadConfig)
    timers: TimerConfig = Field(default_factory=TimerConfig)
    consumer: ConsumerConfig = Field(default_factory=ConsumerConfig)
    bfd: BfdConfig = Field(default_factory=BfdConfig)

    def as_scenario_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class ConfigLoader:
    """Configuration loader (YAML + environment variables)"""

    @staticmethod
    def _expand_env_vars(content: str) -> str:
        """
        Substitute environment variables

        Supported forms:
        - ${VAR_NAME}: environment variable (empty string when unset)
        - ${VAR_NAME:default}: environment variable or default

        Args:
            content: YAML file content

        Returns:
            str: content with variables substituted
        """
        pattern = r'\$\{([^}:]+)(?::([^}]*))?\}'

        def replacer(match):
            var_name = match.group(1)
            default_value = match.group(2) if match.group(2) is not None else None

            value = os.environ.get(var_name)

            if value is None:
                if default_value is not None:
                    return default_value
                logger.warning(f"Environment variable '{var_name}' not set, using empty string")
                return ""

            return value

        return re.sub(pattern, replacer, content)

    @staticmethod
    def resolve(file_path: str) -> Path:
        """Relative paths are taken from backend/"""
        path = Path(file_path)
        if not path.is_absolute() and not path.exists():
            path = BACKEND_DIR / file_path
        return path

    @staticmethod
    def load_yaml(file_path: str) -> Dict[str, Any]:
        """
        Load a YAML file with environment substitution

        Args:
            file_path: path of the file (relative paths are taken from backend/)

        Returns:
            Dict[str, Any]: parsed YAML, empty for an empty file

        Raises:
            FileNotFoundError: missing file
            yaml.YAMLError: malformed YAML
        """
        path = ConfigLoader.resolve(file_path)

        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path, 'r', encoding='utf-8') as f:
            content = f.read()

        content = ConfigLoader._expand_env_vars(content)

        try:
            data = yaml.safe_load(content)
            logger.debug(f"Loaded config: {path.name}")
            return data or {}
        except yaml.YAMLError:
            logger.error(f"Failed to parse YAML: {path}")
            raise

    @staticmethod
    def load_app_config(config_path: str = "config/app.yaml") -> ApplicationConfig:
        data = ConfigLoader.load_yaml(config_path)
        return ApplicationConfig(**data)

    @staticmethod
    def load_simulation_config(config_path: str = "config/simulation.yaml") -> SimulationDefaults:
        data = ConfigLoader.load_yaml(config_path)
        return SimulationDefaults(**data)


# ============================================================================
# Scenario files
# ============================================================================

def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Nested dicts merge key by key; anything else in override wins"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def parse_override(text: str) -> Dict[str, Any]:
    """
    Turn `a.b.c=value` into {"a": {"b": {"c": value}}}

    The value is parsed as YAML, so numbers, booleans and lists keep their type.

    Raises:
        ConfigurationError: no `=` or an empty key
    """
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigurationError(f"Override must look like key=value, got '{text}'", details={"override": text})
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError:
        value = raw
    result: Dict[str, Any] = {}
    cursor = result
    parts = key.split(".")
    for part in parts[:-1]:
        cursor = cursor.setdefault(part, {})
    cursor[parts[-1]] = value
    return result


def build_scenario(data: Dict[str, Any], overrides: Iterable[str] = (), defaults: Optional[SimulationDefaults] = None) -> ScenarioConfig:
    """
    Validate scenario data merged over the defaults

    Raises:
        ConfigurationError: the merged scenario is invalid
    """
    defaults = defaults or get_simulation_config()
    merged = deep_merge(defaults.as_scenario_dict(), data)
    for override in overrides:
        merged = deep_merge(merged, parse_override(override))
    try:
        return ScenarioConfig(**merged)
    except ValidationError as e:
        errors = [
            {"field": ".".join(str(part) for part in error["loc"]), "message": error["msg"]}
            for error in e.errors()
        ]
        raise ConfigurationError("Invalid scenario", details={"errors": errors}) from e


def load_scenario(path: str, overrides: Iterable[str] = ()) -> ScenarioConfig:
    """
    Load a scenario file

    Args:
        path: `.scn` file; bare names are looked up in the scenario directory
        overrides: `key=value` strings, dotted keys reach nested sections

    Returns:
        ScenarioConfig: validated scenario

    Raises:
        ConfigurationError: missing file, malformed YAML or invalid scenario
    """
    candidate = ConfigLoader.resolve(path)
    if not candidate.exists():
        candidate = ConfigLoader.resolve(str(Path(settings.SCENARIO_DIR) / path))
    try:
        data = ConfigLoader.load_yaml(str(candidate))
    except FileNotFoundError as e:
        raise ConfigurationError(f"Scenario file not found: {path}", details={"path": path}) from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Malformed scenario file: {path}", details={"path": path, "error": str(e)}) from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Scenario file must be a mapping: {path}", details={"path": path})

    data.setdefault("name", candidate.stem)
    scenario = build_scenario(data, overrides)
    logger.info(f"Loaded scenario '{scenario.name}' from {candidate}")
    return scenario


# ============================================================================
# Singletons
# ============================================================================

_app_config: Optional[ApplicationConfig] = None
_simulation_config: Optional[SimulationDefaults] = None


def get_app_config(reload: bool = False) -> ApplicationConfig:
    global _app_config

    if _app_config is None or reload:
        _app_config = ConfigLoader.load_app_config()

    return _app_config


def get_simulation_config(reload: bool = False) -> SimulationDefaults:
    """
    Scenario defaults (cached)

    Args:
        reload: read simulation.yaml again

    Returns:
        SimulationDefaults: validated defaults
    """
    global _simulation_config

    if _simulation_config is None or reload:
        _simulation_config = ConfigLoader.load_simulation_config()

    return _simulation_config

