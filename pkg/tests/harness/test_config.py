"""Unit Tests for Experiment Configuration

Self-Explanatory: Flat key parsing, per-dimension defaults, environment overrides and the
ConfigError key contract.
Run: pytest tests/harness/
"""

from pathlib import Path

import pytest

from src.harness.config import (
    DEFAULT_SETTINGS,
    SEED_ENV,
    Algorithm,
    build_config,
    load_config,
)
from src.surrogate.acquisition import SpreadMode
from src.utils.errors import ConfigError

CONFIGS_DIR = Path(__file__).resolve().parents[2] / "configs"


def test_minimal_config_uses_defaults():
    config = build_config({"problems": "zdt1", "dims": 10})
    assert config.problems == ["zdt1"]
    assert config.dims == [10]
    assert config.algorithms == [Algorithm.SAEAME]
    assert config.repeats == 11
    assert config.settings_for(10) == (50, 300)
    assert config.settings_for(50) == DEFAULT_SETTINGS[50]


def test_comma_lists_and_per_dim_overrides():
    config = build_config({
        "problems": "ZDT1, dtlz2",
        "dims": "10, 30",
        "algorithms": "saeame,random-search",
        "pop_size_n30": 60,
        "budget_n30": 500,
        "budget_n10": 120,
    })
    assert config.problems == ["zdt1", "dtlz2"]
    assert config.dims == [10, 30]
    assert config.algorithms == [Algorithm.SAEAME, Algorithm.RANDOM_SEARCH]
    assert config.settings_for(30) == (60, 500)
    assert config.settings_for(10) == (50, 120)


def test_saeame_options_flow_into_optimizer_config():
    config = build_config({
        "problems": "zdt1", "dims": 20, "k_select": 4, "spread_mode": "stddev",
        "alg4_union": True, "inner_generations": 7,
    })
    saeame = config.saeame_config(20)
    assert saeame.inner_pop == 100
    assert saeame.k_select == 4
    assert saeame.spread_mode is SpreadMode.STDDEV
    assert saeame.alg4_union
    assert saeame.inner_generations == 7


def test_seed_environment_override(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "77")
    assert build_config({"problems": "zdt1", "dims": 10, "base_seed": 3}).base_seed == 77

    monkeypatch.setenv(SEED_ENV, "abc")
    with pytest.raises(ConfigError) as exc:
        build_config({"problems": "zdt1", "dims": 10})
    assert exc.value.key == SEED_ENV


@pytest.mark.parametrize(
    "raw,key",
    [
        ({"problems": "zdt1", "dims": 10, "colour": "blue"}, "colour"),
        ({"problems": "zdt5", "dims": 10}, "problems"),
        ({"problems": "zdt1", "dims": 10, "repeats": 0}, "repeats"),
        ({"problems": "zdt1", "dims": 10, "algorithms": "moead"}, "algorithms"),
        ({"problems": "zdt1", "dims": 30}, "pop_size_n30"),
        ({"problems": "zdt1", "dims": 10, "pop_size_n10": 51}, "pop_size_n10"),
        ({"problems": "zdt1", "dims": 10, "budget_n10": 0}, "budget_n10"),
        ({"dims": 10}, "problems"),
    ],
)
def test_invalid_keys_are_named(raw, key):
    with pytest.raises(ConfigError) as exc:
        build_config(raw)
    assert exc.value.key == key


def test_load_config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text("# comment\nproblems: zdt1, dtlz7\ndims: 10\nrepeats: 3  # few\nm: 2\n", encoding="utf-8")
    config = load_config(path)
    assert config.problems == ["zdt1", "dtlz7"]
    assert config.repeats == 3
    assert config.m == 2


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")

    not_mapping = tmp_path / "list.yaml"
    not_mapping.write_text("- zdt1\n- zdt2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(not_mapping)

    broken = tmp_path / "broken.yaml"
    broken.write_text("problems: [zdt1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken)

    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        load_config(empty)
    assert exc.value.key == "problems"


def test_shipped_configs_load():
    for name in ("smoke", "desk_scale", "full_benchmark"):
        config = load_config(CONFIGS_DIR / f"{name}.yaml")
        assert config.problems
