"""Decaying Gaussian pulse transported across (0, 2)² minus B((1, 1), 0.5)."""

from typing import Any

from ..problem import GaussianPulse
from .base import BenchmarkCase, register_case


@register_case
class PulseCase(BenchmarkCase):
    """Starts with height 1 at (0.5, 0.5) and reaches (1.5, 1.5) with height
    1/6 at t = 1.25. The void boundary carries the analytic solution."""

    name = "pulse"
    transient = True

    def get_description(self) -> str:
        return "Transient Gaussian pulse (nu=0.01, c=(0.8,0.8), Pe=160)"

    def defaults(self) -> dict[str, Any]:
        return {
            "degrees": [2],
            "meshes": [32],
            "flux": "centered",
            "interface_bc": "dirichlet",
            "viscosity": 0.01,
            "velocity": [0.8, 0.8],
            "level_set": {"kind": "circle", "center": [1.0, 1.0], "radius": 0.5},
            "box": [0.0, 2.0, 0.0, 2.0],
            "dt": 2.5e-3,
            "t_end": 1.25,
            "sample_times": [0.0, 0.1, 1.0, 1.25],
            "profile_x": 0.625,
            "profile_time": 0.2,
        }

    def exact_solution(self, config):
        return GaussianPulse(config.velocity, config.viscosity, origin=(0.5, 0.5))
