"""Configuration loading, defaults and validation."""

import json
from pathlib import Path

import pytest

from xhdg_bench.core.config import (
    BenchmarkConfig,
    apply_overrides,
    default_config,
    load_config,
    save_config,
)
from xhdg_bench.core.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def test_default_config_uses_case_defaults():
    config = default_config("peanut")
    assert config.interface_bc == "neumann"
    assert config.velocity == [25.0, 25.0]
    assert config.box == [-1.0, 1.0, -1.0, 1.0]
    assert config.name == "peanut_centered_neumann"


def test_unknown_case():
    with pytest.raises(ConfigError):
        default_config("square")


def test_round_trip(tmp_path):
    config = apply_overrides(default_config("circle-convection"), flux="upwind", meshes=[4, 8])
    path = save_config(config, tmp_path / "nested" / "config.json")
    assert load_config(path) == config


def test_missing_keys_fall_back_to_case_defaults():
    config = BenchmarkConfig.from_dict({"case": "pulse", "flux": "upwind"})
    assert config.flux == "upwind"
    assert config.viscosity == 0.01
    assert config.profile_x == 0.625


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError, match="unknown configuration keys"):
        BenchmarkConfig.from_dict({"case": "peanut", "tau": 3})


@pytest.mark.parametrize("changes", [
    {"flux": "downwind"},
    {"interface_bc": "robin"},
    {"viscosity": 0.0},
    {"degrees": [0]},
    {"degrees": [5]},
    {"meshes": [8, 4]},
    {"meshes": []},
    {"box": [1.0, 0.0, 0.0, 1.0]},
    {"level_set": {"kind": "ellipse"}},
    {"dt": -1.0},
    {"velocity": [1.0]},
    {"geometry_order": 0},
])
def test_validation(changes):
    with pytest.raises(ConfigError):
        apply_overrides(default_config(), **changes)


def test_overrides_ignore_none():
    config = default_config()
    assert apply_overrides(config, flux=None, degrees=None) == config


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    with pytest.raises(ConfigError):
        load_config(broken)
    listing = tmp_path / "list.json"
    listing.write_text(json.dumps([1, 2]))
    with pytest.raises(ConfigError):
        load_config(listing)


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_are_valid(path):
    config = load_config(path)
    assert config.flux in path.stem
