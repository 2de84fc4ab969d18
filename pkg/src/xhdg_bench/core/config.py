"""Benchmark configuration.

A configuration is one JSON document naming a case plus every parameter of
the run: degrees and meshes of the sweep, flux scheme, interface condition,
physics, geometry and time stepping. Keys left out fall back to the case
defaults from the case registry.
"""

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .cases import get_case, list_cases
from .errors import ConfigError
from .geometry import list_level_sets

DEFAULT_CASE = "circle-diffusion"
FLUXES = ("centered", "upwind")
INTERFACE_BCS = ("dirichlet", "neumann")
MIN_DEGREE, MAX_DEGREE = 1, 4


@dataclass
class BenchmarkConfig:
    """Configuration of one benchmark run or sweep."""
    case: str = DEFAULT_CASE
    degrees: list[int] = field(default_factory=lambda: [1, 2, 3])
    meshes: list[int] = field(default_factory=lambda: [8, 16, 32])
    flux: str = "centered"
    interface_bc: str = "dirichlet"
    viscosity: float = 1.0
    velocity: list[float] = field(default_factory=lambda: [1.0, 1.0])
    level_set: dict[str, Any] = field(
        default_factory=lambda: {"kind": "circle", "center": [0.5, 0.5], "radius": 0.42}
    )
    box: list[float] = field(default_factory=lambda: [0.0, 1.0, 0.0, 1.0])
    dt: float = 2.5e-3
    t_end: float = 1.25
    sample_times: list[float] = field(default_factory=lambda: [0.0, 0.1, 1.0, 1.25])
    geometry_order: int | None = None  # defaults to p
    length_scale: float = 1.0
    pivot_tolerance: float = 1e-12
    profile_x: float | None = None
    profile_time: float | None = None
    output_dir: str = "results"
    export_fields: bool = False
    report: bool = False

    @property
    def name(self) -> str:
        """Run label used for output file names."""
        return f"{self.case}_{self.flux}_{self.interface_bc}"

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BenchmarkConfig":
        """Create from dictionary, filling missing keys from the case defaults."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        values = default_config(data.get("case", DEFAULT_CASE)).to_dict()
        values.update(data)
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        """Raise ConfigError on the first invalid parameter."""
        if get_case(self.case) is None:
            raise ConfigError(f"unknown case '{self.case}' (available: {', '.join(list_cases())})")
        if self.flux not in FLUXES:
            raise ConfigError(f"flux must be one of {FLUXES}, got '{self.flux}'")
        if self.interface_bc not in INTERFACE_BCS:
            raise ConfigError(f"interface_bc must be one of {INTERFACE_BCS}, got '{self.interface_bc}'")
        if self.viscosity <= 0.0:
            raise ConfigError(f"viscosity must be positive, got {self.viscosity}")
        if len(self.velocity) != 2:
            raise ConfigError("velocity needs two components")
        if not self.degrees or any(not MIN_DEGREE <= p <= MAX_DEGREE for p in self.degrees):
            raise ConfigError(f"degrees must lie in [{MIN_DEGREE}, {MAX_DEGREE}], got {self.degrees}")
        if not self.meshes or any(n < 1 for n in self.meshes):
            raise ConfigError(f"meshes must be positive, got {self.meshes}")
        if any(b <= a for a, b in zip(self.meshes, self.meshes[1:])):
            raise ConfigError(f"meshes must be strictly increasing, got {self.meshes}")
        if len(self.box) != 4 or self.box[1] <= self.box[0] or self.box[3] <= self.box[2]:
            raise ConfigError(f"box must be [x_min, x_max, y_min, y_max], got {self.box}")
        if self.level_set.get("kind") not in list_level_sets():
            raise ConfigError(
                f"unknown level set '{self.level_set.get('kind')}' "
                f"(available: {', '.join(list_level_sets())})"
            )
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0.0:
            raise ConfigError(f"t_end must be non-negative, got {self.t_end}")
        if self.length_scale <= 0.0:
            raise ConfigError(f"length_scale must be positive, got {self.length_scale}")
        if self.geometry_order is not None and self.geometry_order < 1:
            raise ConfigError(f"geometry_order must be >= 1, got {self.geometry_order}")


def default_config(case: str = DEFAULT_CASE) -> BenchmarkConfig:
    """Configuration with every value taken from the case defaults."""
    found = get_case(case)
    if found is None:
        raise ConfigError(f"unknown case '{case}' (available: {', '.join(list_cases())})")
    return BenchmarkConfig(case=found.name, **found.defaults())


def load_config(path: Path) -> BenchmarkConfig:
    """Load a configuration from a JSON file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except (json.JSONDecodeError, OSError) as e:
        raise ConfigError(f"could not read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return BenchmarkConfig.from_dict(data)


def save_config(config: BenchmarkConfig, path: Path) -> Path:
    """Save configuration as JSON.

    Returns:
        Path to the saved config file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config.to_dict(), f, indent=2)
        f.write("\n")
    return path


def apply_overrides(config: BenchmarkConfig, **overrides) -> BenchmarkConfig:
    """Copy of ``config`` with the non-None overrides applied and validated.

    Changing ``case`` without other keys keeps the remaining values; use
    ``default_config`` for a fresh case.
    """
    changes = {key: value for key, value in overrides.items() if value is not None}
    known = {f.name for f in fields(BenchmarkConfig)}
    unknown = sorted(set(changes) - known)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    updated = replace(config, **changes)
    updated.validate()
    return updated
