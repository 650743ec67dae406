"""Farm configuration and its key=value config-file format.

The file format is flat `key = value` lines with `#` comments; nested fields
use dotted keys (dataset.mode, fitness.selection_strength, ...). Unknown keys
are rejected. The single step_limit key feeds both the VM budget and the
fitness parameters.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .datasets import DatasetConfig
from .evolution import CROSSOVER_METHODS, EvolutionParams
from .fitness import FitnessParams


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class TerminationParams:
    max_generations: int = 100
    elite_target: int = 0  # 0 disables the elite-count stop condition


@dataclass(frozen=True)
class FarmConfig:
    population_size: int = 64
    genome_length: int = 256
    step_limit: int = 4096
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    fitness: FitnessParams = field(default_factory=FitnessParams)
    evolution: EvolutionParams = field(default_factory=EvolutionParams)
    test_input_count: int = 32
    termination: TerminationParams = field(default_factory=TerminationParams)
    master_seed: int = 1

    def validate(self) -> "FarmConfig":
        if self.population_size < 2 or self.population_size % 2 != 0:
            raise ConfigError("population_size must be even and >= 2")
        if self.genome_length < 1:
            raise ConfigError("genome_length must be >= 1")
        if self.step_limit < 1:
            raise ConfigError("step_limit must be >= 1")
        if self.test_input_count < 1:
            raise ConfigError("test_input_count must be >= 1")
        if self.termination.max_generations < 0:
            raise ConfigError("termination.max_generations must be >= 0")
        if self.termination.elite_target < 0:
            raise ConfigError("termination.elite_target must be >= 0")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.fitness.step_limit != self.step_limit:
            raise ConfigError("fitness step_limit must equal step_limit")
        try:
            self.dataset.validate()
            self.fitness.validate()
            self.evolution.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def config_to_dict(config: FarmConfig) -> dict:
    return {
        "population_size": config.population_size,
        "genome_length": config.genome_length,
        "step_limit": config.step_limit,
        "dataset": {
            "mode": config.dataset.mode,
            "num_examples": config.dataset.num_examples,
            "fixed_input_len": config.dataset.fixed_input_len,
            "fixed_output_len": config.dataset.fixed_output_len,
            "universal_max_len": config.dataset.universal_max_len,
        },
        "fitness": {
            "selection_strength": config.fitness.selection_strength,
            "correlation_mode": config.fitness.correlation_mode,
        },
        "evolution": {
            "mutation_rate": config.evolution.mutation_rate,
            "crossover_rate": config.evolution.crossover_rate,
            "crossover_method": config.evolution.crossover_method,
            "elite_probability": config.evolution.elite_probability,
        },
        "test_input_count": config.test_input_count,
        "termination": {
            "max_generations": config.termination.max_generations,
            "elite_target": config.termination.elite_target,
        },
        "master_seed": config.master_seed,
    }


def config_digest(config: FarmConfig) -> str:
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse_int(key: str, text: str, line: int) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"line {line}: {key} must be an integer, got {text!r}") from None


def _parse_float(key: str, text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"line {line}: {key} must be a number, got {text!r}") from None


def _parse_bool(key: str, text: str, line: int) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"line {line}: {key} must be true or false, got {text!r}")


def _parse_choice(key: str, text: str, line: int, choices: tuple[str, ...]) -> str:
    if text not in choices:
        raise ConfigError(f"line {line}: {key} must be one of {choices}, got {text!r}")
    return text


_INT_KEYS = {
    "population_size",
    "genome_length",
    "step_limit",
    "test_input_count",
    "master_seed",
    "dataset.num_examples",
    "dataset.fixed_input_len",
    "dataset.fixed_output_len",
    "dataset.universal_max_len",
    "termination.max_generations",
    "termination.elite_target",
}
_FLOAT_KEYS = {
    "fitness.selection_strength",
    "evolution.mutation_rate",
    "evolution.crossover_rate",
    "evolution.elite_probability",
}
_BOOL_KEYS = {"fitness.correlation_mode"}
_CHOICE_KEYS = {
    "dataset.mode": ("universal", "fixed"),
    "evolution.crossover_method": CROSSOVER_METHODS,
}
ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | set(_CHOICE_KEYS)


def parse_config_text(text: str) -> FarmConfig:
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in _INT_KEYS:
            values[key] = _parse_int(key, value, lineno)
        elif key in _FLOAT_KEYS:
            values[key] = _parse_float(key, value, lineno)
        elif key in _BOOL_KEYS:
            values[key] = _parse_bool(key, value, lineno)
        else:
            values[key] = _parse_choice(key, value, lineno, _CHOICE_KEYS[key])
    return build_config(values)


def build_config(values: dict[str, object]) -> FarmConfig:
    """Assemble a validated FarmConfig from flat dotted-key values."""
    defaults = FarmConfig()

    def get(key: str, fallback):
        return values.get(key, fallback)

    step_limit = get("step_limit", defaults.step_limit)
    config = FarmConfig(
        population_size=get("population_size", defaults.population_size),
        genome_length=get("genome_length", defaults.genome_length),
        step_limit=step_limit,
        dataset=DatasetConfig(
            mode=get("dataset.mode", defaults.dataset.mode),
            num_examples=get("dataset.num_examples", defaults.dataset.num_examples),
            fixed_input_len=get("dataset.fixed_input_len", defaults.dataset.fixed_input_len),
            fixed_output_len=get("dataset.fixed_output_len", defaults.dataset.fixed_output_len),
            universal_max_len=get("dataset.universal_max_len", defaults.dataset.universal_max_len),
        ),
        fitness=FitnessParams(
            selection_strength=get("fitness.selection_strength", defaults.fitness.selection_strength),
            correlation_mode=get("fitness.correlation_mode", defaults.fitness.correlation_mode),
            step_limit=step_limit,
        ),
        evolution=EvolutionParams(
            mutation_rate=get("evolution.mutation_rate", defaults.evolution.mutation_rate),
            crossover_rate=get("evolution.crossover_rate", defaults.evolution.crossover_rate),
            crossover_method=get("evolution.crossover_method", defaults.evolution.crossover_method),
            elite_probability=get("evolution.elite_probability", defaults.evolution.elite_probability),
        ),
        test_input_count=get("test_input_count", defaults.test_input_count),
        termination=TerminationParams(
            max_generations=get("termination.max_generations", defaults.termination.max_generations),
            elite_target=get("termination.elite_target", defaults.termination.elite_target),
        ),
        master_seed=get("master_seed", defaults.master_seed),
    )
    return config.validate()


def load_config_file(path: str | Path) -> FarmConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)
