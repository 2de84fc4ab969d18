"""Analytic solutions and manufactured problem data."""

import numpy as np
import pytest

from xhdg_bench.core.problem import (
    BoundaryLayer,
    ExpSine,
    GaussianPulse,
    InterfaceCondition,
    Polynomial,
    manufactured_problem,
)

STEP = 1e-5


def _points():
    rng = np.random.default_rng(3)
    return rng.uniform(0.1, 0.9, size=(25, 2))


def _numerical_gradient(exact, points, t=0.0):
    dx = np.array([STEP, 0.0])
    dy = np.array([0.0, STEP])
    return np.column_stack((
        (exact.value(points + dx, t) - exact.value(points - dx, t)) / (2 * STEP),
        (exact.value(points + dy, t) - exact.value(points - dy, t)) / (2 * STEP),
    ))


def _numerical_laplacian(exact, points, t=0.0):
    h = 1e-4
    total = -4.0 * exact.value(points, t)
    for shift in ([h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]):
        total += exact.value(points + np.array(shift), t)
    return total / h**2


SOLUTIONS = [
    ExpSine(),
    BoundaryLayer(1.0, 1.0),
    BoundaryLayer(2.0, 3.0),
    GaussianPulse((0.8, 0.8), 0.05),
    Polynomial.from_terms({(2, 1): 1.5, (0, 3): -1.0, (1, 0): 0.5}),
]


@pytest.mark.parametrize("exact", SOLUTIONS, ids=lambda e: type(e).__name__)
def test_gradient_matches_finite_differences(exact):
    points = _points()
    assert np.allclose(exact.gradient(points, 0.3), _numerical_gradient(exact, points, 0.3), atol=1e-6)


@pytest.mark.parametrize("exact", SOLUTIONS, ids=lambda e: type(e).__name__)
def test_laplacian_matches_finite_differences(exact):
    points = _points()
    assert np.allclose(exact.laplacian(points, 0.3), _numerical_laplacian(exact, points, 0.3), atol=1e-3)


def test_pulse_time_derivative():
    exact = GaussianPulse((0.8, 0.8), 0.05)
    points = _points()
    numerical = (exact.value(points, 0.3 + STEP) - exact.value(points, 0.3 - STEP)) / (2 * STEP)
    assert np.allclose(exact.time_derivative(points, 0.3), numerical, atol=1e-6)


def test_pulse_solves_the_homogeneous_equation():
    exact = GaussianPulse((0.8, 0.8), 0.01)
    problem = manufactured_problem(exact, (0.8, 0.8), 0.01)
    points = np.random.default_rng(5).uniform(0.0, 2.0, size=(40, 2))
    assert np.max(np.abs(problem.source(points, 0.7))) < 1e-9


def test_pulse_height():
    exact = GaussianPulse((0.8, 0.8), 0.01)
    assert exact.height(0.0) == 1.0
    assert abs(exact.height(1.25) - 1.0 / 6.0) < 1e-15
    peak = np.array([[0.5 + 0.8 * 1.25, 0.5 + 0.8 * 1.25]])
    assert abs(exact.value(peak, 1.25)[0] - 1.0 / 6.0) < 1e-15


def test_boundary_layer_vanishes_on_the_box():
    exact = BoundaryLayer(1.0, 1.0)
    s = np.linspace(0.0, 1.0, 11)
    for points in (np.column_stack((s, 0 * s)), np.column_stack((s, 0 * s + 1.0)),
                   np.column_stack((0 * s, s)), np.column_stack((0 * s + 1.0, s))):
        assert np.allclose(exact.value(points), 0.0, atol=1e-14)


def test_boundary_layer_rejects_zero_exponent():
    with pytest.raises(ValueError):
        BoundaryLayer(0.0, 1.0)


def test_manufactured_neumann_flux():
    exact = ExpSine()
    problem = manufactured_problem(exact, (1.0, 2.0), 0.5, interface_kind="neumann")
    points = _points()
    normals = np.tile([0.6, 0.8], (len(points), 1))
    expected = (normals @ problem.c) * exact.value(points) - 0.5 * np.einsum(
        "ij,ij->i", exact.gradient(points), normals
    )
    assert np.allclose(problem.interface.neumann(points, normals), expected)
    assert problem.interface.dirichlet is None


def test_interface_condition_needs_data():
    with pytest.raises(ValueError):
        InterfaceCondition(kind="dirichlet")
    with pytest.raises(ValueError):
        InterfaceCondition(kind="neumann")


def test_viscosity_must_be_positive():
    with pytest.raises(ValueError):
        manufactured_problem(ExpSine(), (1.0, 1.0), 0.0)
