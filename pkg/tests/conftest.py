"""Shared fixtures: small meshes, level sets and manufactured problems."""

import numpy as np
import pytest

from xhdg_bench.core.discretization import Discretization
from xhdg_bench.core.geometry import build_mesh, get_level_set
from xhdg_bench.core.local_solver import StabilizationSpec
from xhdg_bench.core.problem import Polynomial, manufactured_problem


def polynomial_of_degree(p: int) -> Polynomial:
    """Full-degree polynomial used by the patch tests."""
    terms = {(0, 0): 0.3, (1, 0): 1.0, (0, 1): -0.5}
    if p >= 2:
        terms[(1, 1)] = 0.7
        terms[(2, 0)] = -0.4
    if p >= 3:
        terms[(1, 2)] = 0.25
    if p >= 4:
        terms[(4, 0)] = 0.1
        terms[(2, 2)] = -0.3
    return Polynomial.from_terms(terms)


@pytest.fixture
def unit_mesh():
    return build_mesh(4)


@pytest.fixture
def circle_disc():
    """Unit box minus B((0.5, 0.5), 0.42) at p = 2 on the 8 x 8 mesh."""
    return Discretization(build_mesh(8), get_level_set("circle"), 2)


@pytest.fixture
def open_disc():
    """No interface: every element is standard."""
    return Discretization(build_mesh(2), get_level_set("none"), 1)


@pytest.fixture
def centered():
    return StabilizationSpec("centered", viscosity=0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def linear_problem():
    return manufactured_problem(polynomial_of_degree(1), velocity=(1.0, 0.5), viscosity=0.3)
