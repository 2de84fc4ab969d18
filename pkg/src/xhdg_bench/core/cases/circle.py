"""Square with a circular void: diffusion- and convection-dominated cases."""

from typing import Any

from ..problem import BoundaryLayer, ExpSine
from .base import BenchmarkCase, register_case

CIRCLE = {"kind": "circle", "center": [0.5, 0.5], "radius": 0.42}


def _circle_defaults(**overrides) -> dict[str, Any]:
    values = {
        "degrees": [1, 2, 3, 4],
        "meshes": [4, 8, 16, 32, 64],
        "flux": "centered",
        "interface_bc": "dirichlet",
        "viscosity": 1.0,
        "velocity": [1.0, 1.0],
        "level_set": dict(CIRCLE),
        "box": [0.0, 1.0, 0.0, 1.0],
    }
    values.update(overrides)
    return values


@register_case
class CircleDiffusionCase(BenchmarkCase):
    """ν = 1, c = (1, 1); u = e^{x+y} sin(πx) sin(πy)."""

    name = "circle-diffusion"

    def get_description(self) -> str:
        return "Circular void, diffusion-dominated (nu=1, c=(1,1))"

    def defaults(self) -> dict[str, Any]:
        return _circle_defaults()

    def exact_solution(self, config):
        return ExpSine()


@register_case
class CircleConvectionCase(BenchmarkCase):
    """ν = 0.05, c = (1, 1), Pe = 20; boundary layers at x = 1 and y = 1."""

    name = "circle-convection"

    def get_description(self) -> str:
        return "Circular void, convection-dominated (nu=0.05, c=(1,1), Pe=20)"

    def defaults(self) -> dict[str, Any]:
        return _circle_defaults(viscosity=0.05)

    def exact_solution(self, config):
        return BoundaryLayer(*config.velocity)
