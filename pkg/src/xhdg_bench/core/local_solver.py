"""Elemental (local) problems and static condensation.

On every active element the unknowns (u, q) are expressed in terms of the
trace Λ on its three faces:

    [u; q] = U Λ + f_U,   stacked as [u; q_x; q_y] with q = (q_x, q_y).

The blocks are built once per element (``LocalOperator``) and reused for
every right-hand side; loads depend on time. On Neumann cut elements the
interface trace ũ is eliminated element-wise before condensation, so it
never reaches the global system.
"""

import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from .discretization import Discretization
from .errors import SingularInterfaceMass, SingularLocalMatrix
from .geometry import ElementKind
from .problem import ProblemDefinition

GRAZING_TOLERANCE = 1e-14
SCHEMES = ("centered", "upwind")

Scheme = Literal["centered", "upwind"]


# ============================================================================
# Stabilization
# ============================================================================

@dataclass(frozen=True)
class StabilizationSpec:
    """Choice of τ = τ_d + τ_c.

    Attributes:
        scheme: ``centered`` (τ = ν/l + |c·n| on both sides) or ``upwind``
            (convective part only on the upwind side of a face).
        viscosity: ν.
        length_scale: l in η_d = ν/l.
    """
    scheme: Scheme = "centered"
    viscosity: float = 1.0
    length_scale: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown flux scheme '{self.scheme}' (expected one of {SCHEMES})")
        if self.length_scale <= 0.0:
            raise ValueError("length scale must be positive")

    @property
    def eta_d(self) -> float:
        return self.viscosity / self.length_scale


def tau(
    spec: StabilizationSpec,
    c: np.ndarray,
    plus_normals: np.ndarray,
    side: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Diffusive and convective stabilization at face points.

    Args:
        spec: Stabilization choice.
        c: Constant velocity.
        plus_normals: Normals n⁺ of the face (outward from its + element).
        side: +1 for the + element, -1 for the − element.

    Returns:
        (τ_d, τ_c), one value per point.
    """
    cn = plus_normals @ c
    speed = np.abs(cn)
    if spec.scheme == "centered":
        return np.full_like(cn, spec.eta_d), speed

    grazing = speed < GRAZING_TOLERANCE
    safe = np.where(grazing, 1.0, speed)
    factor = (speed + side * cn) / (2.0 * safe)
    tau_d = np.where(grazing, 0.5 * spec.eta_d, spec.eta_d * factor)
    tau_c = np.where(grazing, 0.0, speed * factor)
    return tau_d, tau_c


def _weighted(left: np.ndarray, weights: np.ndarray, right: np.ndarray) -> np.ndarray:
    # leftᵀ diag(weights) right
    return left.T @ (weights[:, None] * right)


def _factor(matrix: np.ndarray, error_cls: type[Exception], what: str):
    """LU factors, raising ``error_cls`` on an exactly zero pivot."""
    if not np.all(np.isfinite(matrix)):
        raise error_cls(f"{what} has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise error_cls(f"{what} is singular")
    return lu, piv


# ============================================================================
# Element operators
# ============================================================================

@dataclass(eq=False)
class InterfaceElimination:
    """Element-wise elimination of ũ on a Neumann cut element.

    ũ = T [u; q] − t with t = −A_ũũ⁻¹ g.
    """
    coupling: np.ndarray  # [A_uũ; A_qũ], (3 nd, ni)
    transfer: np.ndarray  # T = −A_ũũ⁻¹ [A_ũu, A_ũq], (ni, 3 nd)
    lu: tuple
    load_basis: np.ndarray  # M_I at the interface points
    weights: np.ndarray
    points: np.ndarray
    normals: np.ndarray

    def offset(self, problem: ProblemDefinition, t: float) -> np.ndarray:
        """t = −A_ũũ⁻¹ g for Neumann data at time t."""
        g_n = problem.interface.neumann(self.points, self.normals, t)
        g = self.load_basis.T @ (self.weights * g_n)
        return -scipy.linalg.lu_solve(self.lu, g, check_finite=False)


@dataclass(eq=False)
class LocalOperator:
    """Time-independent elemental blocks of one active element.

    Attributes:
        A: Element matrix 𝔸 = [[A_uu, A_uq], [A_qu, A_qq]], (3 nd, 3 nd),
            with any interface elimination already folded in.
        B: Coupling to the face traces [A_uΛ; A_qΛ], (3 nd, 3 nl).
        C: Global-equation rows [A_Λu, A_Λq], (3 nl, 3 nd).
        D: Global-equation trace block A_ΛΛ, (3 nl, 3 nl).
        mass: Mass matrix of u on Ω_i.
        face_active: Which local faces carry an active trace.
    """
    element: int
    kind: ElementKind
    nd: int
    nl: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    mass: np.ndarray
    face_active: np.ndarray
    volume_basis: np.ndarray
    volume_points: np.ndarray
    volume_weights: np.ndarray
    interface: InterfaceElimination | None = None
    dirichlet_trace: tuple[np.ndarray, ...] | None = None
    _lu_cache: dict = field(default_factory=dict, repr=False)

    def loads(self, problem: ProblemDefinition, t: float = 0.0) -> tuple[np.ndarray, np.ndarray | None]:
        """Right-hand side [f_u; f_q] at time t and, on Neumann cut
        elements, the interface offset t."""
        nd = self.nd
        rhs = np.zeros(3 * nd)
        source = problem.source(self.volume_points, t)
        rhs[:nd] = self.volume_basis.T @ (self.volume_weights * source)

        offset = None
        if self.interface is not None:
            offset = self.interface.offset(problem, t)
            rhs += self.interface.coupling @ offset
        elif self.dirichlet_trace is not None:
            basis, weights, points, normals, weight_u = self.dirichlet_trace
            u_i = problem.interface.dirichlet(points, t)
            rhs[:nd] += basis.T @ (weight_u * u_i)
            rhs[nd:2 * nd] -= basis.T @ (weights * normals[:, 0] * u_i)
            rhs[2 * nd:] -= basis.T @ (weights * normals[:, 1] * u_i)
        return rhs, offset

    def factorize(self, shift: float = 0.0):
        """LU of 𝔸 + shift·M on the u-block (cached per shift)."""
        if shift not in self._lu_cache:
            matrix = self.A
            if shift:
                matrix = matrix.copy()
                matrix[: self.nd, : self.nd] += shift * self.mass
            self._lu_cache[shift] = _factor(
                matrix, SingularLocalMatrix, f"local matrix of element {self.element}"
            )
        return self._lu_cache[shift]

    def condense(
        self,
        problem: ProblemDefinition,
        t: float = 0.0,
        shift: float = 0.0,
        u_prev: np.ndarray | None = None,
    ) -> "LocalSolverFactors":
        """U, f_U, Q, f_Q for the loads at time t.

        ``shift`` is 1/Δt for a backward-Euler step with previous state
        ``u_prev``; 0 for a steady solve.
        """
        rhs, offset = self.loads(problem, t)
        if shift and u_prev is not None:
            rhs[: self.nd] += shift * (self.mass @ u_prev)
        lu = self.factorize(shift)
        trace_map = -scipy.linalg.lu_solve(lu, self.B, check_finite=False)
        load_map = scipy.linalg.lu_solve(lu, rhs, check_finite=False)
        nd = self.nd
        return LocalSolverFactors(
            element=self.element,
            kind=self.kind,
            U=trace_map[:nd],
            Q=trace_map[nd:],
            f_U=load_map[:nd],
            f_Q=load_map[nd:],
            operator=self,
            interface_offset=offset,
        )


@dataclass(eq=False)
class LocalSolverFactors:
    """Condensed element: u = U Λ + f_U and q = Q Λ + f_Q."""
    element: int
    kind: ElementKind
    U: np.ndarray
    Q: np.ndarray
    f_U: np.ndarray
    f_Q: np.ndarray
    operator: LocalOperator
    interface_offset: np.ndarray | None = None

    def solve(self, trace: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(u, q) from the stacked local trace; q has shape (2, nd)."""
        u = self.U @ trace + self.f_U
        q = (self.Q @ trace + self.f_Q).reshape(2, -1)
        return u, q

    def global_rows(self) -> tuple[np.ndarray, np.ndarray]:
        """Element contribution K_e Λ = rhs_e to the global equation."""
        op = self.operator
        K = op.C[:, : op.nd] @ self.U + op.C[:, op.nd:] @ self.Q + op.D
        rhs = -(op.C[:, : op.nd] @ self.f_U + op.C[:, op.nd:] @ self.f_Q)
        return K, rhs

    def interface_trace(self, u: np.ndarray, q: np.ndarray) -> np.ndarray | None:
        """Recovered interface trace ũ on Neumann cut elements."""
        elim = self.operator.interface
        if elim is None:
            return None
        return elim.transfer @ np.concatenate((u, q.ravel())) - self.interface_offset


# ============================================================================
# Builders
# ============================================================================

def _volume_blocks(disc: Discretization, element: int, problem: ProblemDefinition):
    rule = disc.rules(element).volume
    N, G = disc.basis_at(element, rule.points)
    w = rule.weights
    c, nu = problem.c, problem.viscosity
    nd = N.shape[1]

    mass = _weighted(N, w, N)
    convection = c[0] * G[:, :, 0] + c[1] * G[:, :, 1]
    A_uu = -_weighted(convection, w, N)
    A_uq = np.hstack((_weighted(N, w, G[:, :, 0]), _weighted(N, w, G[:, :, 1])))
    A = np.zeros((3 * nd, 3 * nd))
    A[:nd, :nd] = A_uu
    A[:nd, nd:] = A_uq
    A[nd:, :nd] = -A_uq.T
    A[nd:2 * nd, nd:2 * nd] = mass / nu
    A[2 * nd:, 2 * nd:] = mass / nu
    return A, mass, N, rule


def _face_blocks(
    disc: Discretization,
    element: int,
    problem: ProblemDefinition,
    spec: StabilizationSpec,
    A: np.ndarray,
):
    mesh = disc.mesh
    nd = disc.element_basis.dim
    nl = disc.face_basis.dim
    c = problem.c
    B = np.zeros((3 * nd, 3 * nl))
    C = np.zeros((3 * nl, 3 * nd))
    D = np.zeros((3 * nl, 3 * nl))
    face_active = np.zeros(3, dtype=bool)

    for j, rule in enumerate(disc.rules(element).faces):
        if rule is None:
            continue
        face_active[j] = True
        face = mesh.element_faces[element, j]
        N = disc.values_at(element, rule.points)
        M = disc.face_basis.values(rule.params)
        n, w = rule.normals, rule.weights
        if mesh.face_elements[face, 0] == element:
            tau_d, tau_c = tau(spec, c, n, side=1)
        else:
            tau_d, tau_c = tau(spec, c, -n, side=-1)
        total = tau_d + tau_c
        cn = n @ c
        cols = slice(j * nl, (j + 1) * nl)

        A[:nd, :nd] += _weighted(N, w * total, N)
        B[:nd, cols] = _weighted(N, w * (cn - total), M)
        B[nd:2 * nd, cols] = _weighted(N, w * n[:, 0], M)
        B[2 * nd:, cols] = _weighted(N, w * n[:, 1], M)
        C[cols, :nd] = _weighted(M, w * total, N)
        C[cols, nd:2 * nd] = _weighted(M, w * n[:, 0], N)
        C[cols, 2 * nd:] = _weighted(M, w * n[:, 1], N)
        D[cols, cols] = _weighted(M, w * (cn - total), M)
    return B, C, D, face_active


def _base_operator(
    disc: Discretization,
    element: int,
    problem: ProblemDefinition,
    spec: StabilizationSpec,
    kind: ElementKind,
) -> LocalOperator:
    A, mass, N, rule = _volume_blocks(disc, element, problem)
    B, C, D, face_active = _face_blocks(disc, element, problem, spec, A)
    return LocalOperator(
        element=element,
        kind=kind,
        nd=disc.element_basis.dim,
        nl=disc.face_basis.dim,
        A=A,
        B=B,
        C=C,
        D=D,
        mass=mass,
        face_active=face_active,
        volume_basis=N,
        volume_points=rule.points,
        volume_weights=rule.weights,
    )


def _interface_data(disc: Discretization, element: int, problem: ProblemDefinition, spec: StabilizationSpec):
    rule = disc.rules(element).interface
    N = disc.values_at(element, rule.points)
    n, w = rule.normals, rule.weights
    tau_d, tau_c = tau(spec, problem.c, n, side=1)
    return rule, N, n, w, tau_d + tau_c, n @ problem.c


def _require_kind(disc: Discretization, element: int, expected: ElementKind) -> None:
    kind = disc.kind(element)
    if kind != expected:
        raise ValueError(f"element {element} is {kind.name.lower()}, expected {expected.name.lower()}")


def build_standard(
    disc: Discretization, element: int, problem: ProblemDefinition, spec: StabilizationSpec
) -> LocalOperator:
    """Operator of an uncut element."""
    _require_kind(disc, element, ElementKind.STANDARD)
    return _base_operator(disc, element, problem, spec, ElementKind.STANDARD)


def build_cut_dirichlet(
    disc: Discretization, element: int, problem: ProblemDefinition, spec: StabilizationSpec
) -> LocalOperator:
    """Operator of a cut element with u = u_I imposed weakly on I_i."""
    _require_kind(disc, element, ElementKind.CUT)
    op = _base_operator(disc, element, problem, spec, ElementKind.CUT)
    rule, N, n, w, total, cn = _interface_data(disc, element, problem, spec)
    op.A[: op.nd, : op.nd] += _weighted(N, w * total, N)
    # u_I enters the u-equation with weight τ − c·n
    op.dirichlet_trace = (N, w, rule.points, n, w * (total - cn))
    return op


def build_cut_neumann(
    disc: Discretization, element: int, problem: ProblemDefinition, spec: StabilizationSpec
) -> LocalOperator:
    """Operator of a cut element with (c u + q)·n = g_N on I_i; ũ is eliminated."""
    _require_kind(disc, element, ElementKind.CUT)
    op = _base_operator(disc, element, problem, spec, ElementKind.CUT)
    rule, N, n, w, total, cn = _interface_data(disc, element, problem, spec)
    M = disc.face_basis.values(rule.params)
    nd = op.nd

    op.A[:nd, :nd] += _weighted(N, w * total, N)
    coupling = np.vstack(
        (_weighted(N, w * (cn - total), M), _weighted(N, w * n[:, 0], M), _weighted(N, w * n[:, 1], M))
    )
    rows = np.hstack(
        (_weighted(M, w * total, N), _weighted(M, w * n[:, 0], N), _weighted(M, w * n[:, 1], N))
    )
    trace_block = _weighted(M, w * (cn - total), M)
    if rule.measure <= 0.0:
        raise SingularInterfaceMass(f"element {element}: interface has zero length")
    lu = _factor(trace_block, SingularInterfaceMass, f"interface block of element {element}")
    transfer = -scipy.linalg.lu_solve(lu, rows, check_finite=False)
    op.A += coupling @ transfer
    op.interface = InterfaceElimination(
        coupling=coupling,
        transfer=transfer,
        lu=lu,
        load_basis=M,
        weights=w,
        points=rule.points,
        normals=n,
    )
    return op


def build_local_operator(
    disc: Discretization, element: int, problem: ProblemDefinition, spec: StabilizationSpec
) -> LocalOperator:
    """Dispatch on the element kind and the interface condition."""
    kind = disc.kind(element)
    if kind == ElementKind.VOID:
        raise ValueError(f"element {element} is void and has no local problem")
    if kind == ElementKind.STANDARD:
        return build_standard(disc, element, problem, spec)
    if problem.interface.kind == "neumann":
        return build_cut_neumann(disc, element, problem, spec)
    return build_cut_dirichlet(disc, element, problem, spec)
