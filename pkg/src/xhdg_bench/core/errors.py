"""Exception hierarchy for xhdg-bench.

Every failure raised by the library derives from ``XHDGError`` so callers
(the CLI and the sweep runner) can record it without aborting a whole run.
"""


class XHDGError(Exception):
    """Base class for all library errors."""


# ============================================================================
# Geometry
# ============================================================================

class GeometryError(XHDGError):
    """Level-set geometry could not be resolved."""

    def __init__(self, message: str, element: int | None = None):
        self.element = element
        if element is not None:
            message = f"element {element}: {message}"
        super().__init__(message)


class DegenerateCut(GeometryError):
    """The cut of an element cannot be resolved into height cells."""


class RootFindFailure(GeometryError):
    """A sign change of the level set could not be bracketed."""


# ============================================================================
# Quadrature
# ============================================================================

class QuadratureError(XHDGError):
    """Quadrature rule construction failed."""


class UnsupportedDegree(QuadratureError):
    """Requested polynomial degree is outside the supported range."""

    def __init__(self, degree: int, supported: str):
        self.degree = degree
        super().__init__(f"degree {degree} not supported (expected {supported})")


# ============================================================================
# Linear algebra
# ============================================================================

class SolverError(XHDGError):
    """A local or global linear system could not be solved."""


class SingularMass(SolverError):
    """Face mass matrix is singular (active sub-segment of zero length)."""


class SingularLocalMatrix(SolverError):
    """Elemental system is singular (inadmissible τ or degenerate geometry)."""


class SingularInterfaceMass(SolverError):
    """Interface trace system of a Neumann cut element is singular."""


class SingularSystem(SolverError):
    """Global trace system is singular or failed its residual check."""

    def __init__(
        self,
        message: str,
        pivot_ratio: float | None = None,
        residual: float | None = None,
    ):
        self.pivot_ratio = pivot_ratio
        self.residual = residual
        details = []
        if pivot_ratio is not None:
            details.append(f"pivot ratio {pivot_ratio:.3e}")
        if residual is not None:
            details.append(f"relative residual {residual:.3e}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class SingularPostprocess(SolverError):
    """Bordered postprocessing system is singular."""


# ============================================================================
# Configuration
# ============================================================================

class ConfigError(XHDGError):
    """Invalid or unreadable benchmark configuration."""
