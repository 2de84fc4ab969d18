"""Nodal bases and L2 projections."""

import numpy as np
import pytest

from xhdg_bench.core.approximation import (
    ElementBasis,
    FaceBasis,
    eval_basis,
    gauss_lobatto_nodes,
    l2_project,
    project_to_face,
    uniform_triangle_nodes,
)
from xhdg_bench.core.errors import SingularMass, UnsupportedDegree
from xhdg_bench.core.discretization import Discretization
from xhdg_bench.core.geometry import build_mesh, get_level_set
from xhdg_bench.core.quadrature import partial_face_rule, triangle_rule


@pytest.mark.parametrize("p", [0, 1, 2, 3, 4, 5])
def test_element_basis_is_nodal(p):
    basis = ElementBasis(p)
    assert basis.dim == (p + 1) * (p + 2) // 2
    assert np.allclose(basis.values(basis.nodes), np.eye(basis.dim), atol=1e-10)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_partition_of_unity(p, rng):
    basis = ElementBasis(p)
    points = rng.dirichlet(np.ones(3), size=20)[:, :2]
    assert np.allclose(basis.values(points).sum(axis=1), 1.0)
    assert np.allclose(basis.gradients(points).sum(axis=1), 0.0, atol=1e-9)


def test_reproduces_polynomials(rng):
    basis = ElementBasis(4)
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    coefficients = basis.interpolate(lambda x: x[:, 0] ** 3 * x[:, 1] - x[:, 1] ** 2, vertices)
    points = rng.dirichlet(np.ones(3), size=10)[:, :2]
    expected = points[:, 0] ** 3 * points[:, 1] - points[:, 1] ** 2
    assert np.allclose(basis.values(points) @ coefficients, expected, atol=1e-10)


def test_unsupported_element_degree():
    with pytest.raises(UnsupportedDegree):
        ElementBasis(6)
    with pytest.raises(UnsupportedDegree):
        FaceBasis(6)


def test_uniform_nodes_order():
    nodes = uniform_triangle_nodes(3)
    assert np.allclose(nodes[0], [0.0, 0.0])
    assert np.allclose(nodes[3], [1.0, 0.0])
    assert np.allclose(nodes[-1], [0.0, 1.0])
    assert len(uniform_triangle_nodes(9)) == 55


def test_gauss_lobatto_nodes():
    assert np.allclose(gauss_lobatto_nodes(1), [0.0, 1.0])
    assert np.allclose(gauss_lobatto_nodes(2), [0.0, 0.5, 1.0])
    nodes = gauss_lobatto_nodes(4)
    assert np.allclose(nodes, 1.0 - nodes[::-1])


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_face_basis(p):
    basis = FaceBasis(p)
    assert np.allclose(basis.values(basis.nodes), np.eye(p + 1), atol=1e-12)
    s = np.linspace(0.0, 1.0, 11)
    assert np.allclose(basis.values(s).sum(axis=1), 1.0)
    assert np.allclose(basis.derivatives(s).sum(axis=1), 0.0, atol=1e-9)


def test_projection_of_constant():
    rule = triangle_rule(4)
    basis = ElementBasis(2)
    coefficients = l2_project(basis.values(rule.points), rule.weights, np.full(len(rule.weights), 3.0))
    assert np.allclose(coefficients, 3.0)


def test_projection_on_empty_region():
    basis = ElementBasis(1)
    with pytest.raises(SingularMass):
        l2_project(basis.values(np.zeros((2, 2))), np.zeros(2), np.zeros(2))


def test_projection_onto_partial_face_is_exact_for_polynomials():
    mesh = build_mesh(2)
    rule = partial_face_rule(mesh, 0, (0.25, 0.6), 6)
    basis = FaceBasis(2)
    g = lambda points, t=0.0: 1.0 + points[:, 0] - 2.0 * points[:, 0] ** 2
    coefficients = project_to_face(g, rule, basis)
    a, b = mesh.face_points(0)
    nodes = a + basis.nodes[:, None] * (b - a)
    assert np.allclose(coefficients, g(nodes), atol=1e-10)


@pytest.mark.parametrize("p", [1, 3])
def test_eval_basis_matches_element_basis(p, rng):
    basis = ElementBasis(p)
    points = rng.dirichlet(np.ones(3), size=15)[:, :2]
    values, gradients = eval_basis(basis, points)
    assert np.array_equal(values, basis.values(points))
    assert np.array_equal(gradients, basis.gradients(points))
    # gradients of the nodal basis sum to zero
    assert np.allclose(gradients.sum(axis=1), 0.0)


def test_physical_gradients_of_a_linear_field(rng):
    disc = Discretization(build_mesh(4), get_level_set("none"), 2)
    element = 9
    coefficients = disc.element_basis.interpolate(
        lambda points: 2.0 * points[:, 0] - 3.0 * points[:, 1], disc.mesh.element_vertices(element)
    )
    corners = disc.mesh.element_vertices(element)
    points = rng.dirichlet(np.ones(3), size=10) @ corners
    values, gradients = disc.basis_at(element, points)
    assert np.allclose(values @ coefficients, 2.0 * points[:, 0] - 3.0 * points[:, 1])
    assert np.allclose(np.einsum("pjd,j->pd", gradients, coefficients), [2.0, -3.0])
