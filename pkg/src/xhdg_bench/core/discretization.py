"""Per-mesh discretization context.

Holds everything that depends only on (mesh, level set, degree):
classification, cut geometry, bases, affine element maps and cached
quadrature rules. All solver stages read from one ``Discretization``.
"""

import numpy as np

from .approximation import ElementBasis, FaceBasis, eval_basis, uniform_triangle_nodes
from .geometry import (
    BackgroundMesh,
    CutElementGeometry,
    ElementClass,
    ElementKind,
    LevelSet,
    classify,
    extract_cut_geometry,
)
from .quadrature import ElementRules, element_rules


class Discretization:
    """Geometry, bases and quadrature for one (mesh, level set, p)."""

    def __init__(
        self,
        mesh: BackgroundMesh,
        level_set: LevelSet,
        p: int,
        geometry_order: int | None = None,
    ):
        self.mesh = mesh
        self.level_set = level_set
        self.p = p
        self.geometry_order = geometry_order or p
        self.element_basis = ElementBasis(p)
        self.face_basis = FaceBasis(p)
        self.classification: ElementClass = classify(mesh, level_set)
        self.geometries: dict[int, CutElementGeometry] = {
            int(e): extract_cut_geometry(mesh, level_set, int(e), self.geometry_order, self.classification)
            for e in self.classification.elements_of(ElementKind.CUT)
        }

        corners = mesh.vertices[mesh.elements]
        self._origin = corners[:, 0, :]
        self._jacobian = np.stack(
            (corners[:, 1, :] - corners[:, 0, :], corners[:, 2, :] - corners[:, 0, :]), axis=-1
        )
        self._inverse = np.linalg.inv(self._jacobian)
        self._rules: dict[tuple[int, int], ElementRules] = {}
        self._bases: dict[int, ElementBasis] = {p: self.element_basis}

    # ------------------------------------------------------------------
    # Degrees
    # ------------------------------------------------------------------

    @property
    def weak_form_degree(self) -> int:
        return 2 * self.p + 2

    @property
    def error_degree(self) -> int:
        return 2 * (self.p + 1) + 2

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------

    def kind(self, element: int) -> ElementKind:
        return ElementKind(self.classification.element_kind[element])

    @property
    def active_elements(self) -> np.ndarray:
        return self.classification.active_elements

    def basis(self, degree: int) -> ElementBasis:
        if degree not in self._bases:
            self._bases[degree] = ElementBasis(degree)
        return self._bases[degree]

    def rules(self, element: int, degree: int | None = None) -> ElementRules:
        degree = self.weak_form_degree if degree is None else degree
        key = (element, degree)
        if key not in self._rules:
            self._rules[key] = element_rules(
                self.mesh,
                self.classification,
                element,
                degree,
                self.geometries.get(element),
            )
        return self._rules[key]

    def to_reference(self, element: int, points: np.ndarray) -> np.ndarray:
        return (points - self._origin[element]) @ self._inverse[element].T

    def basis_at(
        self, element: int, points: np.ndarray, basis: ElementBasis | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """Basis values and physical gradients at physical points."""
        values, gradients = eval_basis(basis or self.element_basis, self.to_reference(element, points))
        return values, gradients @ self._inverse[element]

    def values_at(
        self, element: int, points: np.ndarray, basis: ElementBasis | None = None
    ) -> np.ndarray:
        return (basis or self.element_basis).values(self.to_reference(element, points))

    def evaluate(
        self,
        element: int,
        coefficients: np.ndarray,
        points: np.ndarray,
        basis: ElementBasis | None = None,
    ) -> np.ndarray:
        return self.values_at(element, points, basis) @ coefficients

    # ------------------------------------------------------------------
    # Measures
    # ------------------------------------------------------------------

    def area(self, degree: int | None = None) -> float:
        """|Ω| from full and cut volume rules."""
        return float(sum(self.rules(int(e), degree).volume.measure for e in self.active_elements))

    def interface_length(self, degree: int | None = None) -> float:
        return float(sum(self.rules(e, degree).interface.measure for e in self.geometries))

    def lattice(self, element: int, resolution: int = 9) -> np.ndarray:
        """Physical points of the reference lattice ξ_i = i/resolution inside the closure of Ω_i."""
        ref = uniform_triangle_nodes(resolution)
        corners = self.mesh.element_vertices(element)
        points = corners[0] + ref @ self._jacobian[element].T
        if self.kind(element) == ElementKind.CUT:
            points = points[self.level_set(points) >= 0.0]
        return points

    def summary(self) -> dict[str, int]:
        counts = self.classification.counts()
        counts["faces"] = self.mesh.n_faces
        return counts
