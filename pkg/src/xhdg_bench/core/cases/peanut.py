"""Peanut-shaped void on (-1, 1)² with Neumann data on the interface."""

from typing import Any

from ..problem import BoundaryLayer
from .base import BenchmarkCase, register_case


@register_case
class PeanutCase(BenchmarkCase):
    """c = (25, 25), ν = 1 (Pe = 50); boundary-layer solution on the larger box."""

    name = "peanut"

    def get_description(self) -> str:
        return "Peanut-shaped void, Neumann interface (nu=1, c=(25,25), Pe=50)"

    def defaults(self) -> dict[str, Any]:
        return {
            "degrees": [1, 2, 3, 4],
            "meshes": [4, 8, 16, 32, 64],
            "flux": "centered",
            "interface_bc": "neumann",
            "viscosity": 1.0,
            "velocity": [25.0, 25.0],
            "level_set": {"kind": "peanut", "r0": 0.37, "r1": 0.17},
            "box": [-1.0, 1.0, -1.0, 1.0],
        }

    def exact_solution(self, config):
        return BoundaryLayer(*config.velocity)
