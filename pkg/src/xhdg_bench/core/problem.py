"""Problem definitions and analytic solutions.

A ``ProblemDefinition`` bundles the convective velocity c, the viscosity ν,
the source f and the boundary data of

    ∂u/∂t + ∇·(c u + q) = f,   q + ν ∇u = 0   in Ω,
    u = u_D on ∂Ω^ext,   (c u + q)·n = g_N  or  u = u_I  on I.

Data callables are vectorized: ``g(points, t)`` with points of shape (N, 2);
Neumann data also receive the unit normals, ``g_N(points, normals, t)``.
Manufactured problems derive f and all boundary data from an exact solution.
"""

from dataclasses import dataclass
from typing import Callable, Literal, Protocol

import numpy as np
from numpy.polynomial import polynomial as npoly

ScalarField = Callable[[np.ndarray, float], np.ndarray]
NormalField = Callable[[np.ndarray, np.ndarray, float], np.ndarray]
InterfaceKind = Literal["dirichlet", "neumann"]


class ExactSolution(Protocol):
    def value(self, points: np.ndarray, t: float = 0.0) -> np.ndarray: ...
    def gradient(self, points: np.ndarray, t: float = 0.0) -> np.ndarray: ...
    def laplacian(self, points: np.ndarray, t: float = 0.0) -> np.ndarray: ...
    def time_derivative(self, points: np.ndarray, t: float = 0.0) -> np.ndarray: ...


@dataclass(frozen=True)
class InterfaceCondition:
    """Boundary condition on the level-set interface I."""
    kind: InterfaceKind
    dirichlet: ScalarField | None = None
    neumann: NormalField | None = None

    def __post_init__(self):
        if self.kind == "dirichlet" and self.dirichlet is None:
            raise ValueError("dirichlet interface condition needs u_I data")
        if self.kind == "neumann" and self.neumann is None:
            raise ValueError("neumann interface condition needs g_N data")


@dataclass(frozen=True)
class ProblemDefinition:
    velocity: tuple[float, float]
    viscosity: float
    source: ScalarField
    exterior_dirichlet: ScalarField
    interface: InterfaceCondition
    exact: ExactSolution | None = None

    def __post_init__(self):
        if self.viscosity <= 0.0:
            raise ValueError(f"viscosity must be positive, got {self.viscosity}")

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.velocity, dtype=float)


def _zero(points: np.ndarray, t: float = 0.0) -> np.ndarray:
    return np.zeros(len(points))


def manufactured_problem(
    exact: ExactSolution,
    velocity: tuple[float, float],
    viscosity: float,
    interface_kind: InterfaceKind = "dirichlet",
) -> ProblemDefinition:
    """Problem whose source and boundary data reproduce ``exact``.

    f = ∂u/∂t + c·∇u − ν Δu (c is constant), u_D = u_I = u and
    g_N = (c·n) u − ν ∇u·n.
    """
    c = np.asarray(velocity, dtype=float)
    nu = float(viscosity)

    def source(points, t=0.0):
        return (
            exact.time_derivative(points, t)
            + exact.gradient(points, t) @ c
            - nu * exact.laplacian(points, t)
        )

    def neumann(points, normals, t=0.0):
        flux_normal = np.einsum("ij,ij->i", exact.gradient(points, t), normals)
        return (normals @ c) * exact.value(points, t) - nu * flux_normal

    interface = InterfaceCondition(
        kind=interface_kind,
        dirichlet=exact.value if interface_kind == "dirichlet" else None,
        neumann=neumann if interface_kind == "neumann" else None,
    )
    return ProblemDefinition(
        velocity=(float(c[0]), float(c[1])),
        viscosity=nu,
        source=source,
        exterior_dirichlet=exact.value,
        interface=interface,
        exact=exact,
    )


# ============================================================================
# Analytic solutions
# ============================================================================

class ExpSine:
    """u = exp(x + y) sin(πx) sin(πy)."""

    def value(self, points, t=0.0):
        x, y = points[:, 0], points[:, 1]
        return np.exp(x + y) * np.sin(np.pi * x) * np.sin(np.pi * y)

    def gradient(self, points, t=0.0):
        x, y = points[:, 0], points[:, 1]
        e = np.exp(x + y)
        sx, cx = np.sin(np.pi * x), np.cos(np.pi * x)
        sy, cy = np.sin(np.pi * y), np.cos(np.pi * y)
        return np.column_stack((e * sy * (sx + np.pi * cx), e * sx * (sy + np.pi * cy)))

    def laplacian(self, points, t=0.0):
        x, y = points[:, 0], points[:, 1]
        e = np.exp(x + y)
        sx, cx = np.sin(np.pi * x), np.cos(np.pi * x)
        sy, cy = np.sin(np.pi * y), np.cos(np.pi * y)
        k = 1.0 - np.pi**2
        return e * sy * (k * sx + 2 * np.pi * cx) + e * sx * (k * sy + 2 * np.pi * cy)

    def time_derivative(self, points, t=0.0):
        return _zero(points)


class BoundaryLayer:
    """u = xy (1 − e^{(x−1)a}) (1 − e^{(y−1)b}) / ((1 − e^{−a})(1 − e^{−b})).

    With (a, b) = c this has layers at x = 1 and y = 1.
    """

    def __init__(self, a: float, b: float):
        if a == 0.0 or b == 0.0:
            raise ValueError("boundary-layer exponents must be nonzero")
        self.a, self.b = float(a), float(b)
        self._scale = 1.0 / ((1.0 - np.exp(-self.a)) * (1.0 - np.exp(-self.b)))

    @staticmethod
    def _factor(z, k):
        # g(z) = z (1 − e^{k(z−1)}) and its first two derivatives
        e = np.exp(k * (z - 1.0))
        g = z * (1.0 - e)
        dg = (1.0 - e) - k * z * e
        d2g = -k * e * (2.0 + k * z)
        return g, dg, d2g

    def value(self, points, t=0.0):
        gx, _, _ = self._factor(points[:, 0], self.a)
        gy, _, _ = self._factor(points[:, 1], self.b)
        return self._scale * gx * gy

    def gradient(self, points, t=0.0):
        gx, dgx, _ = self._factor(points[:, 0], self.a)
        gy, dgy, _ = self._factor(points[:, 1], self.b)
        return self._scale * np.column_stack((dgx * gy, gx * dgy))

    def laplacian(self, points, t=0.0):
        gx, _, d2gx = self._factor(points[:, 0], self.a)
        gy, _, d2gy = self._factor(points[:, 1], self.b)
        return self._scale * (d2gx * gy + gx * d2gy)

    def time_derivative(self, points, t=0.0):
        return _zero(points)


class GaussianPulse:
    """Decaying pulse u = exp(−|x − x0 − c t|² / ((4t+1)ν)) / (4t + 1)."""

    def __init__(self, velocity, viscosity: float, origin=(0.5, 0.5)):
        self.c = np.asarray(velocity, dtype=float)
        self.nu = float(viscosity)
        self.origin = np.asarray(origin, dtype=float)

    def _parts(self, points, t):
        shift = points - self.origin - self.c * t
        spread = 4.0 * t + 1.0
        u = np.exp(-np.sum(shift**2, axis=1) / (spread * self.nu)) / spread
        return shift, spread, u

    def value(self, points, t=0.0):
        return self._parts(points, t)[2]

    def gradient(self, points, t=0.0):
        shift, spread, u = self._parts(points, t)
        return -2.0 * shift / (spread * self.nu) * u[:, None]

    def laplacian(self, points, t=0.0):
        shift, spread, u = self._parts(points, t)
        k = 2.0 / (spread * self.nu)
        return u * (k**2 * np.sum(shift**2, axis=1) - 2.0 * k)

    def time_derivative(self, points, t=0.0):
        shift, spread, u = self._parts(points, t)
        radius2 = np.sum(shift**2, axis=1)
        return u * (
            -4.0 / spread
            + 2.0 * (shift @ self.c) / (spread * self.nu)
            + 4.0 * radius2 / (spread**2 * self.nu)
        )

    def height(self, t: float) -> float:
        return 1.0 / (4.0 * t + 1.0)


class Polynomial:
    """Bivariate polynomial Σ c[a, b] x^a y^b (patch tests)."""

    def __init__(self, coefficients):
        self.coefficients = np.atleast_2d(np.asarray(coefficients, dtype=float))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], float]) -> "Polynomial":
        size = max(max(a, b) for a, b in terms) + 1
        coefficients = np.zeros((size, size))
        for (a, b), value in terms.items():
            coefficients[a, b] = value
        return cls(coefficients)

    def _eval(self, coefficients, points):
        return npoly.polyval2d(points[:, 0], points[:, 1], coefficients)

    def value(self, points, t=0.0):
        return self._eval(self.coefficients, points)

    def gradient(self, points, t=0.0):
        cx = npoly.polyder(self.coefficients, axis=0)
        cy = npoly.polyder(self.coefficients, axis=1)
        return np.column_stack((self._eval(cx, points), self._eval(cy, points)))

    def laplacian(self, points, t=0.0):
        cxx = npoly.polyder(self.coefficients, m=2, axis=0)
        cyy = npoly.polyder(self.coefficients, m=2, axis=1)
        return self._eval(cxx, points) + self._eval(cyy, points)

    def time_derivative(self, points, t=0.0):
        return _zero(points)
