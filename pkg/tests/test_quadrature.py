"""Quadrature rules on reference, cut and interface regions."""

import math

import numpy as np
import pytest

from xhdg_bench.core.discretization import Discretization
from xhdg_bench.core.errors import UnsupportedDegree
from xhdg_bench.core.geometry import FaceKind, build_mesh, classify, get_level_set
from xhdg_bench.core.quadrature import (
    MAX_RULE_DEGREE,
    affine_triangle_rule,
    cut_rules,
    partial_face_rule,
    segment_rule,
    triangle_rule,
)


@pytest.mark.parametrize("degree", [0, 1, 4, 10, 21])
def test_triangle_rule_measure(degree):
    rule = triangle_rule(degree)
    assert abs(rule.measure - 0.5) < 1e-14
    assert np.all(rule.weights > 0.0)


@pytest.mark.parametrize("a,b", [(2, 3), (0, 5), (4, 0), (3, 3)])
def test_triangle_rule_monomials(a, b):
    rule = triangle_rule(a + b)
    exact = math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
    value = rule.integrate(rule.points[:, 0] ** a * rule.points[:, 1] ** b)
    assert abs(value - exact) < 1e-14


def test_segment_rule():
    s, w = segment_rule(7)
    assert abs(np.dot(w, s**7) - 1.0 / 8.0) < 1e-15
    assert np.all((s > 0.0) & (s < 1.0))


@pytest.mark.parametrize("degree", [-1, MAX_RULE_DEGREE + 1])
def test_unsupported_degree(degree):
    with pytest.raises(UnsupportedDegree):
        triangle_rule(degree)


def test_affine_rule_area():
    vertices = np.array([[0.2, 0.1], [0.7, 0.3], [0.1, 0.9]])
    rule = affine_triangle_rule(vertices, 3)
    e1, e2 = vertices[1] - vertices[0], vertices[2] - vertices[0]
    assert abs(rule.measure - 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])) < 1e-14


def test_partial_face_rule():
    mesh = build_mesh(8)
    tags = classify(mesh, get_level_set("circle"))
    face = int(np.flatnonzero(tags.face_kind == FaceKind.CUT)[0])
    segments = tags.face_segments[face]
    rule = partial_face_rule(mesh, face, segments, 4)
    active = float(np.sum(segments[:, 1] - segments[:, 0]))
    assert abs(rule.measure - mesh.face_length(face) * active) < 1e-14
    assert np.all((rule.params >= segments[0, 0]) & (rule.params <= segments[-1, 1]))
    assert np.allclose(rule.normals, mesh.face_normal(face))

    right = mesh.face_elements[face, 1]
    if right >= 0:
        flipped = partial_face_rule(mesh, face, segments, 4, element=int(right))
        assert np.allclose(flipped.normals, -mesh.face_normal(face))


def test_partial_face_rule_with_two_segments():
    mesh = build_mesh(1)
    rule = partial_face_rule(mesh, 0, [[0.0, 0.3], [0.7, 1.0]], 5)
    assert abs(rule.measure - 0.6) < 1e-14
    assert not np.any((rule.params > 0.3) & (rule.params < 0.7))
    # ∫ s⁵ over both pieces
    exact = (0.3**6 + 1.0 - 0.7**6) / 6.0
    assert abs(rule.integrate(rule.params**5) - exact) < 1e-14


def test_random_polynomial_on_reference_triangle(rng):
    exponents = [(a, b) for a in range(11) for b in range(11 - a)]
    coefficients = rng.normal(size=len(exponents))
    exact = sum(
        c * math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
        for c, (a, b) in zip(coefficients, exponents)
    )
    rule = triangle_rule(10)
    x, y = rule.points[:, 0], rule.points[:, 1]
    values = sum(c * x**a * y**b for c, (a, b) in zip(coefficients, exponents))
    assert abs(rule.integrate(values) - exact) < 1e-13 * max(1.0, abs(exact))


def test_cut_rules_are_exact_for_straight_cuts():
    # Ω = {x > 0.5 + 0.3 (y - 0.5)}: a tilted line, no vertex on it
    disc = Discretization(build_mesh(3), get_level_set("half_plane", normal=(1.0, -0.3)), 2)
    # x² y integrated over the trapezoid between x = 0.35 + 0.3 y and x = 1
    exact = 1.0 / 6.0 - sum(math.comb(3, k) * 0.35 ** (3 - k) * 0.3**k / (k + 2) for k in range(4)) / 3.0
    total = 0.0
    for element in disc.active_elements:
        rule = disc.rules(int(element)).volume
        total += rule.integrate(rule.points[:, 0] ** 2 * rule.points[:, 1])
    assert abs(total - exact) < 1e-13


@pytest.mark.parametrize("degree", [2, 6, 10])
def test_cut_rules_have_positive_weights(circle_disc, degree):
    for geom in circle_disc.geometries.values():
        volume, interface = cut_rules(geom, degree)
        assert np.all(volume.weights > 0.0)
        assert np.all(interface.weights > 0.0)
        assert np.all(circle_disc.level_set(volume.points) >= 0.0)


def test_cut_rule_respects_diagonal_symmetry(circle_disc):
    # the mesh and the circle are both symmetric under (x, y) -> (y, x)
    moments = np.zeros(2)
    for element in circle_disc.active_elements:
        rule = circle_disc.rules(int(element)).volume
        moments += rule.weights @ rule.points
    assert abs(moments[0] - moments[1]) < 1e-10
