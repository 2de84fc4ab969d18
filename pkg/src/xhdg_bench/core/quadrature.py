"""Quadrature rules on triangles, segments, cut regions and interfaces.

Triangle rules are collapsed Gauss–Jacobi × Gauss–Legendre products
(positive weights, any degree). Cut regions are integrated on the exact
level set: each height cell of the cut geometry carries a tensor Gauss rule
whose inner interval ends at the interface root of the line, so weights stay
positive whatever the shape of the cut.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from .errors import UnsupportedDegree
from .geometry import BackgroundMesh, CutElementGeometry, ElementClass

MAX_RULE_DEGREE = 60
CUT_EXTRA_POINTS = 6  # outer points beyond polynomial exactness on curved cells


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points, positive weights and (for boundary rules) unit normals.

    ``params`` holds the 1D parameter of each point for face and interface
    rules, where trace bases are evaluated.
    """
    points: np.ndarray
    weights: np.ndarray
    degree: int
    normals: np.ndarray | None = None
    params: np.ndarray | None = None

    @property
    def measure(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def _check_degree(degree: int) -> None:
    if not 0 <= degree <= MAX_RULE_DEGREE:
        raise UnsupportedDegree(degree, f"0..{MAX_RULE_DEGREE}")


@lru_cache(maxsize=None)
def _gauss_legendre(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = legendre.leggauss(n_points)
    return 0.5 * (x + 1.0), 0.5 * w


def segment_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre points and weights on [0, 1], exact up to ``degree``."""
    _check_degree(degree)
    return _gauss_legendre(degree // 2 + 1)


@lru_cache(maxsize=None)
def _collapsed_radial(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    # weight λ on [0, 1]: Jacobi weight (1 + x) on [-1, 1]
    x, w = special.roots_jacobi(n_points, 0.0, 1.0)
    return 0.5 * (x + 1.0), 0.25 * w


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> QuadratureRule:
    """Rule on the reference triangle (0,0), (1,0), (0,1), exact up to ``degree``."""
    _check_degree(degree)
    n_points = degree // 2 + 1
    lam, w_lam = _collapsed_radial(n_points)
    s, w_s = _gauss_legendre(n_points)
    lam_grid, s_grid = np.meshgrid(lam, s, indexing="ij")
    points = np.column_stack(
        ((lam_grid * (1.0 - s_grid)).ravel(), (lam_grid * s_grid).ravel())
    )
    weights = np.outer(w_lam, w_s).ravel()
    return QuadratureRule(points=points, weights=weights, degree=degree)


def affine_triangle_rule(vertices: np.ndarray, degree: int) -> QuadratureRule:
    """Reference rule mapped onto a straight triangle."""
    ref = triangle_rule(degree)
    v0 = vertices[0]
    jacobian = np.column_stack((vertices[1] - v0, vertices[2] - v0))
    det = abs(np.linalg.det(jacobian))
    return QuadratureRule(
        points=v0 + ref.points @ jacobian.T,
        weights=ref.weights * det,
        degree=degree,
    )


def _stack(points: list[np.ndarray], weights: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    return np.vstack([np.empty((0, 2))] + points), np.concatenate([np.empty(0)] + weights)


def cut_rules(geom: CutElementGeometry, degree: int) -> tuple[QuadratureRule, QuadratureRule]:
    """Volume rule on Ω_i and interface rule on I_i of a cut element.

    Each height cell gets an outer Gauss rule in the base coordinate and,
    on every base line, an inner Gauss rule between the triangle edge and
    the interface root. All weights are products of positive Gauss weights
    and lengths. The interface rule reuses the roots of the outer points
    with weight w_b |∇φ| / |∂φ/∂h|; its normals -∇φ/|∇φ| point into the
    void.
    """
    _check_degree(degree)
    ls = geom.level_set
    b_ref, wb_ref = _gauss_legendre(degree // 2 + 2 + CUT_EXTRA_POINTS)
    h_ref, wh_ref = _gauss_legendre(degree // 2 + 1)

    volume_points, volume_weights = [], []
    for triangle in geom.full_triangles:
        rule = affine_triangle_rule(triangle, degree)
        volume_points.append(rule.points)
        volume_weights.append(rule.weights)

    interface_points, interface_weights, interface_normals = [], [], []
    for cell in geom.cells:
        b0, b1 = cell.base
        b = b0 + (b1 - b0) * b_ref
        wb = (b1 - b0) * wb_ref
        start, end, root = cell.active_span(ls, b)
        length = end - start
        keep = length > 0.0
        heights = start[keep, None] + length[keep, None] * h_ref[None, :]
        volume_points.append(cell.points(np.repeat(b[keep], len(h_ref)), heights.ravel()))
        volume_weights.append(((wb * length)[keep, None] * wh_ref[None, :]).ravel())

        crossing = np.isfinite(root)
        if not np.any(crossing):
            continue
        points = cell.points(b[crossing], root[crossing])
        gradient = ls.gradient(points)
        norm = np.hypot(gradient[:, 0], gradient[:, 1])
        interface_points.append(points)
        interface_weights.append(wb[crossing] * norm / np.abs(gradient[:, cell.axis]))
        interface_normals.append(-gradient / norm[:, None])

    points, weights = _stack(volume_points, volume_weights)
    volume = QuadratureRule(points=points, weights=weights, degree=degree)

    points, weights = _stack(interface_points, interface_weights)
    normals = np.vstack([np.empty((0, 2))] + interface_normals)
    interface = QuadratureRule(
        points=points,
        weights=weights,
        degree=degree,
        normals=normals,
        params=geom.interface_params(points),
    )
    return volume, interface


def cut_volume_rule(geom: CutElementGeometry, degree: int) -> QuadratureRule:
    """Composite rule over the active part Ω_i of a cut element."""
    return cut_rules(geom, degree)[0]


def volume_rule(vertices: np.ndarray, degree: int, geom: CutElementGeometry | None = None) -> QuadratureRule:
    """Full triangle rule for uncut elements, composite rule for cut ones."""
    if geom is None:
        return affine_triangle_rule(vertices, degree)
    return cut_volume_rule(geom, degree)


def interface_rule(geom: CutElementGeometry, degree: int) -> QuadratureRule:
    """Rule on I_i with normals pointing from Ω into the void."""
    return cut_rules(geom, degree)[1]


def partial_face_rule(
    mesh: BackgroundMesh,
    face: int,
    intervals,
    degree: int,
    element: int | None = None,
) -> QuadratureRule:
    """Composite Gauss rule on the active sub-intervals of a face.

    ``intervals`` is one (s0, s1) pair or a (k, 2) array of them. Normals
    are outward from ``element`` (default: the left element L(f)).
    ``params`` are face-parameter coordinates in [0, 1].
    """
    s, w = segment_rule(degree)
    intervals = np.atleast_2d(np.asarray(intervals, dtype=float))
    s0, s1 = intervals[:, 0:1], intervals[:, 1:2]
    params = (s0 + (s1 - s0) * s[None, :]).ravel()
    weights = ((s1 - s0) * w[None, :]).ravel() * mesh.face_length(face)
    a, b = mesh.face_points(face)
    normal = mesh.face_normal(face)
    if element is not None and mesh.face_elements[face, 0] != element:
        normal = -normal
    return QuadratureRule(
        points=a + params[:, None] * (b - a),
        weights=weights,
        degree=degree,
        normals=np.tile(normal, (len(params), 1)),
        params=params,
    )


@dataclass(frozen=True, eq=False)
class ElementRules:
    """All rules of one element at one degree; inactive faces are None."""
    volume: QuadratureRule
    faces: tuple[QuadratureRule | None, QuadratureRule | None, QuadratureRule | None]
    interface: QuadratureRule | None = None


def element_rules(
    mesh: BackgroundMesh,
    classification: ElementClass,
    element: int,
    degree: int,
    geom: CutElementGeometry | None = None,
) -> ElementRules:
    faces = []
    for f in mesh.element_faces[element]:
        segments = classification.face_segments[f]
        if len(segments) == 0:
            faces.append(None)
        else:
            faces.append(partial_face_rule(mesh, int(f), segments, degree, element))
    if geom is None:
        return ElementRules(
            volume=affine_triangle_rule(mesh.element_vertices(element), degree),
            faces=tuple(faces),
        )
    volume, interface = cut_rules(geom, degree)
    return ElementRules(volume=volume, faces=tuple(faces), interface=interface)
