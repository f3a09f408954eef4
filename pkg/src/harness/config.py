"""Experiment Configuration - Flat key/value files validated by pydantic

Self-Explanatory: Which problems, dimensions, algorithms and repeats to run, and with what
per-dimension population size and FE budget.
How:
- File: one `key: value` per line, `#` comments, parsed with yaml.safe_load
- List keys accept YAML lists or comma-separated strings (`problems: zdt1, dtlz2`)
- Per-dimension keys: `pop_size_n<dim>` and `budget_n<dim>`
- Defaults per n: 10 -> (50, 300), 20 -> (100, 400), 50 -> (300, 800)
- SAEA_SEED overrides base_seed; SAEA_WORKERS sets the default worker count
- Any invalid or unknown key raises ConfigError naming it
"""

import os
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import structlog
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.problems.benchmarks import PROBLEM_IDS
from src.saeame.optimizer import SaeaMeConfig
from src.surrogate.acquisition import SpreadMode
from src.utils.errors import ConfigError

logger = structlog.get_logger()

SEED_ENV = "SAEA_SEED"
WORKERS_ENV = "SAEA_WORKERS"
DEFAULT_WORKERS = int(os.getenv(WORKERS_ENV, "1"))

# n -> (population size, FE budget)
DEFAULT_SETTINGS: Dict[int, Tuple[int, int]] = {10: (50, 300), 20: (100, 400), 50: (300, 800)}

PER_DIM_KEY = re.compile(r"^(pop_size|budget)_n(\d+)$")
LIST_KEYS = ("problems", "dims", "algorithms")


class Algorithm(str, Enum):
    SAEAME = "saeame"
    NSGA2_BUDGET = "nsga2-budget"
    RANDOM_SEARCH = "random-search"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problems: List[str]
    dims: List[int]
    algorithms: List[Algorithm] = Field(default_factory=lambda: [Algorithm.SAEAME])
    repeats: int = Field(default=11, ge=1)
    base_seed: int = 0
    m: int = Field(default=3, ge=2)
    pf_points: int = Field(default=1000, ge=2)
    pop_size: Dict[int, int] = Field(default_factory=lambda: {n: s[0] for n, s in DEFAULT_SETTINGS.items()})
    budget: Dict[int, int] = Field(default_factory=lambda: {n: s[1] for n, s in DEFAULT_SETTINGS.items()})

    # SAEA/ME options (flat)
    n_init: Optional[int] = Field(default=None, ge=1)
    k_select: int = Field(default=10, ge=1)
    lcb_coeff: float = Field(default=1.0, ge=0)
    box_coeff: float = Field(default=2.0, ge=0)
    spread_mode: SpreadMode = SpreadMode.VARIANCE
    alg3_literal: bool = False
    alg4_union: bool = False
    inner_generations: int = Field(default=50, ge=0)
    delta: float = Field(default=1e-6, gt=0)
    inject_archive: bool = True

    @field_validator("problems")
    @classmethod
    def _known_problems(cls, value: List[str]) -> List[str]:
        value = [p.strip().lower() for p in value]
        unknown = [p for p in value if p not in PROBLEM_IDS]
        if unknown:
            raise ValueError(f"unknown problem ids {unknown}")
        if not value:
            raise ValueError("at least one problem is required")
        return value

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, value: List[int]) -> List[int]:
        if not value or any(n < 2 for n in value):
            raise ValueError("dims must be a non-empty list of integers >= 2")
        return value

    @model_validator(mode="after")
    def _settings_for_every_dim(self):
        for n in self.dims:
            if n not in self.pop_size:
                raise ConfigError(f"no population size for n={n}", key=f"pop_size_n{n}")
            if n not in self.budget:
                raise ConfigError(f"no budget for n={n}", key=f"budget_n{n}")
            if self.pop_size[n] < 2 or self.pop_size[n] % 2:
                raise ConfigError(f"population size for n={n} must be even and >= 2", key=f"pop_size_n{n}")
            if self.budget[n] < 1:
                raise ConfigError(f"budget for n={n} must be >= 1", key=f"budget_n{n}")
        return self

    def settings_for(self, n: int) -> Tuple[int, int]:
        return self.pop_size[n], self.budget[n]

    def saeame_config(self, n: int) -> SaeaMeConfig:
        return SaeaMeConfig(
            n_init=self.n_init,
            k_select=self.k_select,
            lcb_coeff=self.lcb_coeff,
            box_coeff=self.box_coeff,
            spread_mode=self.spread_mode,
            alg3_literal=self.alg3_literal,
            alg4_union=self.alg4_union,
            inner_pop=self.pop_size[n],
            inner_generations=self.inner_generations,
            delta=self.delta,
            inject_archive=self.inject_archive,
        )


def _normalize(raw: Dict[str, Any]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    per_dim: Dict[str, Dict[int, Any]] = {"pop_size": {}, "budget": {}}
    for key, value in raw.items():
        key = str(key).strip()
        match = PER_DIM_KEY.match(key)
        if match:
            per_dim[match.group(1)][int(match.group(2))] = value
            continue
        if key in LIST_KEYS and isinstance(value, str):
            value = [item.strip() for item in value.split(",") if item.strip()]
        elif key in LIST_KEYS and not isinstance(value, list):
            value = [value]
        data[key] = value
    for name, overrides in per_dim.items():
        if overrides:
            defaults = {n: s[0 if name == "pop_size" else 1] for n, s in DEFAULT_SETTINGS.items()}
            data[name] = {**defaults, **overrides}
    return data


def _error_key(exc: ValidationError) -> Optional[str]:
    for error in exc.errors():
        if error.get("loc"):
            loc = error["loc"]
            if loc[0] in ("pop_size", "budget") and len(loc) > 1:
                return f"{loc[0]}_n{loc[1]}"
            return str(loc[0])
    return None


def build_config(raw: Dict[str, Any]) -> ExperimentConfig:
    """Validate a raw key/value mapping (file contents or test data) into an ExperimentConfig"""
    data = _normalize(raw)
    seed_override = os.getenv(SEED_ENV)
    if seed_override is not None:
        try:
            data["base_seed"] = int(seed_override)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {seed_override!r}", key=SEED_ENV) from None
        logger.info("Base seed overridden from environment", base_seed=data["base_seed"])
    try:
        return ExperimentConfig(**data)
    except ValidationError as exc:
        key = _error_key(exc)
        # a ConfigError raised inside a validator arrives wrapped; surface its own key
        for error in exc.errors():
            original = (error.get("ctx") or {}).get("error")
            if isinstance(original, ConfigError):
                key = original.key
        logger.error("Invalid experiment config", key=key, errors=exc.error_count())
        raise ConfigError(f"invalid config key {key!r}: {exc.errors()[0]['msg']}", key=key) from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}", key=None) from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid key/value text: {exc}", key=None) from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping of keys to values", key=None)
    config = build_config(raw)
    logger.info(
        "Experiment config loaded",
        path=str(path),
        problems=config.problems,
        dims=config.dims,
        algorithms=[a.value for a in config.algorithms],
        repeats=config.repeats,
    )
    return config
