"""Benchmark cases (domain, data and default sweep of each benchmark)."""

from .base import BenchmarkCase, get_case, list_cases, register_case
from .circle import CircleConvectionCase, CircleDiffusionCase
from .peanut import PeanutCase
from .pulse import PulseCase

__all__ = [
    "BenchmarkCase",
    "get_case",
    "list_cases",
    "register_case",
    "CircleDiffusionCase",
    "CircleConvectionCase",
    "PeanutCase",
    "PulseCase",
]
