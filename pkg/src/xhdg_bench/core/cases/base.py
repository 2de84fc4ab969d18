"""Base classes for benchmark cases.

A case owns the physical setup of one benchmark: domain box, level set,
velocity, viscosity, the analytic solution used for errors and boundary
data, and the default sweep. Runners look cases up by name.
"""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any

from ..geometry import Box, LevelSet, get_level_set
from ..problem import ExactSolution, ProblemDefinition, manufactured_problem

if TYPE_CHECKING:
    from ..config import BenchmarkConfig


class BenchmarkCase(ABC):
    """Abstract base class for benchmark cases.

    Subclasses set ``name`` and ``transient`` and provide defaults and the
    exact solution for a configuration.
    """

    name: str = ""
    transient: bool = False

    @abstractmethod
    def get_description(self) -> str:
        """Return a one-line description."""
        ...

    @abstractmethod
    def defaults(self) -> dict[str, Any]:
        """Default configuration values (keys of ``BenchmarkConfig``)."""
        ...

    @abstractmethod
    def exact_solution(self, config: "BenchmarkConfig") -> ExactSolution:
        ...

    def level_set(self, config: "BenchmarkConfig") -> LevelSet:
        params = dict(config.level_set)
        kind = params.pop("kind")
        return get_level_set(kind, **params)

    def box(self, config: "BenchmarkConfig") -> Box:
        return Box.from_sequence(config.box)

    def problem(self, config: "BenchmarkConfig") -> ProblemDefinition:
        """Manufactured problem reproducing the exact solution."""
        return manufactured_problem(
            self.exact_solution(config),
            velocity=tuple(config.velocity),
            viscosity=config.viscosity,
            interface_kind=config.interface_bc,
        )


# Registry of available cases
_cases: dict[str, type[BenchmarkCase]] = {}


def register_case(case_class: type[BenchmarkCase]) -> type[BenchmarkCase]:
    """Decorator to register a case class under its ``name``."""
    _cases[case_class.name] = case_class
    return case_class


def get_case(name: str) -> BenchmarkCase | None:
    """Get a case instance by name."""
    case_class = _cases.get(name.lower())
    if case_class:
        return case_class()
    return None


def list_cases() -> list[str]:
    """List all registered case names."""
    return list(_cases.keys())
