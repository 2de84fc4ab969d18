"""Nodal polynomial bases on the reference triangle and the reference segment.

Element unknowns (u and both components of q) share one Lagrange basis on
uniformly spaced triangle nodes. Face traces use a Lagrange basis on
Gauss–Lobatto nodes of [0, 1]; the same 1D machinery parametrizes curved
interface segments.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as npoly

from .errors import SingularMass, UnsupportedDegree

MAX_ELEMENT_DEGREE = 5  # p <= 4 plus one for the postprocessed field
MAX_FACE_DEGREE = 5


def monomial_exponents(p: int) -> list[tuple[int, int]]:
    """Exponents (a, b) of x^a y^b with a + b <= p, graded by total degree."""
    return [(total - b, b) for total in range(p + 1) for b in range(total + 1)]


def uniform_triangle_nodes(p: int) -> np.ndarray:
    """Uniformly spaced nodes on the reference triangle (0,0), (1,0), (0,1).

    Nodes are ordered row by row in η, so node 0 is (0, 0), node p is (1, 0)
    and the last node is (0, 1). Degree 0 uses the centroid.
    """
    if p == 0:
        return np.array([[1.0 / 3.0, 1.0 / 3.0]])
    return np.array(
        [[i / p, j / p] for j in range(p + 1) for i in range(p + 1 - j)]
    )


def gauss_lobatto_nodes(p: int) -> np.ndarray:
    """p+1 Gauss–Lobatto points on [0, 1], endpoints included."""
    if p == 0:
        return np.array([0.5])
    interior = legendre.Legendre.basis(p).deriv().roots() if p > 1 else np.array([])
    nodes = np.concatenate(([-1.0], np.sort(np.real(interior)), [1.0]))
    return 0.5 * (nodes + 1.0)


# ============================================================================
# 1D Lagrange basis
# ============================================================================

class LagrangeLine:
    """Lagrange basis on arbitrary nodes of [0, 1]."""

    def __init__(self, nodes: np.ndarray):
        self.nodes = np.asarray(nodes, dtype=float)
        self.degree = len(self.nodes) - 1
        vandermonde = npoly.polyvander(self.nodes, self.degree)
        # column j holds the monomial coefficients of the j-th basis function
        self._coefficients = np.linalg.solve(vandermonde, np.eye(len(self.nodes)))
        powers = np.arange(1, self.degree + 1)[:, None]
        self._derivative_coefficients = powers * self._coefficients[1:]

    @property
    def dim(self) -> int:
        return len(self.nodes)

    def values(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return npoly.polyvander(s, self.degree) @ self._coefficients

    def derivatives(self, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.degree == 0:
            return np.zeros((len(s), 1))
        return npoly.polyvander(s, self.degree - 1) @ self._derivative_coefficients


# ============================================================================
# Element and face bases
# ============================================================================

@dataclass(eq=False)
class ElementBasis:
    """Lagrange basis of P_p on the reference triangle."""

    p: int
    nodes: np.ndarray = field(init=False, repr=False)
    exponents: list[tuple[int, int]] = field(init=False, repr=False)
    _coefficients: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.p <= MAX_ELEMENT_DEGREE:
            raise UnsupportedDegree(self.p, f"0..{MAX_ELEMENT_DEGREE}")
        self.nodes = uniform_triangle_nodes(self.p)
        self.exponents = monomial_exponents(self.p)
        vandermonde = self._monomials(self.nodes)
        self._coefficients = np.linalg.solve(vandermonde, np.eye(self.dim))

    @property
    def dim(self) -> int:
        return (self.p + 1) * (self.p + 2) // 2

    def _monomials(self, points: np.ndarray) -> np.ndarray:
        x, y = points[:, 0:1], points[:, 1:2]
        a = np.array([e[0] for e in self.exponents])
        b = np.array([e[1] for e in self.exponents])
        return x**a * y**b

    def values(self, points: np.ndarray) -> np.ndarray:
        """N_j at reference points, shape (n_points, dim)."""
        points = np.atleast_2d(points)
        return self._monomials(points) @ self._coefficients

    def gradients(self, points: np.ndarray) -> np.ndarray:
        """Reference gradients, shape (n_points, dim, 2)."""
        points = np.atleast_2d(points)
        x, y = points[:, 0:1], points[:, 1:2]
        a = np.array([e[0] for e in self.exponents], dtype=float)
        b = np.array([e[1] for e in self.exponents], dtype=float)
        # clamp exponents so 0 * x^-1 never evaluates 0 ** -1
        dx = a * x ** np.maximum(a - 1, 0) * y**b
        dy = b * x**a * y ** np.maximum(b - 1, 0)
        return np.stack(
            (dx @ self._coefficients, dy @ self._coefficients), axis=-1
        )

    def interpolate(self, func, vertices: np.ndarray) -> np.ndarray:
        """Nodal interpolant of ``func(points)`` on the physical triangle."""
        v0 = vertices[0]
        jacobian = np.column_stack((vertices[1] - v0, vertices[2] - v0))
        physical = v0 + self.nodes @ jacobian.T
        return np.asarray(func(physical), dtype=float)


class FaceBasis(LagrangeLine):
    """Lagrange basis of P_p on Gauss–Lobatto nodes of the face parameter."""

    def __init__(self, p: int):
        if not 0 <= p <= MAX_FACE_DEGREE:
            raise UnsupportedDegree(p, f"0..{MAX_FACE_DEGREE}")
        self.p = p
        super().__init__(gauss_lobatto_nodes(p))


def eval_basis(basis: ElementBasis, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and reference gradients of every shape function at ``points``."""
    return basis.values(points), basis.gradients(points)


# ============================================================================
# L2 projections
# ============================================================================

def l2_project(
    basis_values: np.ndarray,
    weights: np.ndarray,
    samples: np.ndarray,
    error_cls: type[Exception] = SingularMass,
) -> np.ndarray:
    """Coefficients of the L2 projection of sampled data onto a nodal basis.

    Args:
        basis_values: Basis evaluated at the quadrature points (n_points, dim).
        weights: Quadrature weights of the region.
        samples: Data sampled at the same points.
        error_cls: Exception raised if the mass matrix is singular.
    """
    mass = basis_values.T @ (weights[:, None] * basis_values)
    load = basis_values.T @ (weights * samples)
    if np.sum(weights) <= 0.0:
        raise error_cls("projection region has zero measure")
    try:
        return scipy.linalg.solve(mass, load, assume_a="sym")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise error_cls(f"singular projection mass matrix: {e}") from e


def project_to_face(g, rule, basis: FaceBasis, t: float = 0.0) -> np.ndarray:
    """L2 projection of ``g(points, t)`` onto P_p of the (partial) face.

    ``rule`` is the face rule of the active sub-segment; its ``params`` are
    face-parameter coordinates where the face basis is evaluated.
    """
    samples = np.asarray(g(rule.points, t), dtype=float)
    return l2_project(basis.values(rule.params), rule.weights, samples)


def project_to_element(g, rule, basis_values: np.ndarray, t: float = 0.0) -> np.ndarray:
    """L2 projection of ``g(points, t)`` onto P_p(Ω_i).

    ``basis_values`` is the element basis at the points of the (full or cut)
    volume rule ``rule``.
    """
    samples = np.asarray(g(rule.points, t), dtype=float)
    return l2_project(basis_values, rule.weights, samples)
