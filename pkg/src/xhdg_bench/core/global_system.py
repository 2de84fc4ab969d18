"""Global trace system: assembly, exterior Dirichlet data, pruned solve and
back-substitution.

The trace Λ lives on every face with P_p dofs; faces entirely in the void
carry no unknowns and are pruned before factorization. Exterior Dirichlet
faces are eliminated into the right-hand side with the L2 projection of u_D
on their active interval.
"""

import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from rich.console import Console
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from .approximation import project_to_face
from .discretization import Discretization
from .errors import SingularSystem
from .geometry import ElementKind
from .local_solver import LocalSolverFactors
from .problem import ProblemDefinition
from .quadrature import partial_face_rule

console = Console(stderr=True)

DEFAULT_PIVOT_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-9


# ============================================================================
# Data structures
# ============================================================================

@dataclass
class SolveDiagnostics:
    """What the trace solve saw; recorded in run manifests."""
    n_dofs: int = 0
    n_active_faces: int = 0
    n_dirichlet_faces: int = 0
    pivot_ratio: float = float("nan")
    residual: float = float("nan")
    ill_conditioned: bool = False
    refinement_steps: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class TraceSystem:
    """Assembled K Λ = F over all faces, before pruning.

    ``dof_map[f]`` lists the global dofs of face f; inactive faces keep their
    rows empty and are dropped by ``prune_and_solve``.
    """
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    dof_map: np.ndarray
    active_faces: np.ndarray
    dirichlet_faces: np.ndarray
    dirichlet_values: np.ndarray

    @property
    def n_faces(self) -> int:
        return len(self.dof_map)

    @property
    def free_dofs(self) -> np.ndarray:
        return self.dof_map[self.active_faces & ~self.dirichlet_faces].ravel()

    @property
    def fixed_dofs(self) -> np.ndarray:
        return self.dof_map[self.dirichlet_faces].ravel()


@dataclass(eq=False)
class SolutionField:
    """Element-wise (u, q) and the face trace at one time.

    Void elements hold NaN; inactive faces hold NaN in ``trace``.
    """
    degree: int
    u: np.ndarray  # (n_elements, nd)
    q: np.ndarray  # (n_elements, 2, nd)
    trace: np.ndarray  # (n_faces, nl)
    element_kind: np.ndarray
    time: float = 0.0
    interface_trace: dict[int, np.ndarray] = field(default_factory=dict)

    def is_active(self, element: int) -> bool:
        return self.element_kind[element] != ElementKind.VOID


def face_dof_map(n_faces: int, n_face_dofs: int) -> np.ndarray:
    return np.arange(n_faces * n_face_dofs).reshape(n_faces, n_face_dofs)


def _local_trace_dofs(disc: Discretization, dof_map: np.ndarray, element: int) -> np.ndarray:
    return dof_map[disc.mesh.element_faces[element]].ravel()


# ============================================================================
# Assembly
# ============================================================================

def assemble(disc: Discretization, factors: dict[int, LocalSolverFactors]) -> TraceSystem:
    """Assemble the global trace system face by face (left element first)."""
    mesh = disc.mesh
    nl = disc.face_basis.dim
    dof_map = face_dof_map(mesh.n_faces, nl)
    active = disc.classification.active_faces
    contributions = {e: f.global_rows() for e, f in factors.items()}

    rows, cols, vals = [], [], []
    rhs = np.zeros(mesh.n_faces * nl)
    for face in np.flatnonzero(active):
        for element in mesh.face_elements[face]:
            if element < 0 or element not in contributions:
                continue
            K, F = contributions[element]
            j = mesh.local_face_index(element, face)
            local = slice(j * nl, (j + 1) * nl)
            targets = dof_map[face]
            columns = _local_trace_dofs(disc, dof_map, element)
            block = K[local]
            rows.append(np.repeat(targets, len(columns)))
            cols.append(np.tile(columns, len(targets)))
            vals.append(block.ravel())
            rhs[targets] += F[local]

    size = mesh.n_faces * nl
    if rows:
        matrix = sparse.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(size, size),
        ).tocsr()
    else:
        matrix = sparse.csr_matrix((size, size))
    return TraceSystem(
        matrix=matrix,
        rhs=rhs,
        dof_map=dof_map,
        active_faces=active,
        dirichlet_faces=np.zeros(mesh.n_faces, dtype=bool),
        dirichlet_values=np.zeros((mesh.n_faces, nl)),
    )


def impose_exterior_dirichlet(
    disc: Discretization, system: TraceSystem, problem: ProblemDefinition, t: float = 0.0
) -> TraceSystem:
    """Fix the trace on active exterior faces to the L2 projection of u_D."""
    mesh = disc.mesh
    for face in np.flatnonzero(system.active_faces):
        if not mesh.is_boundary_face(face):
            continue
        segments = disc.classification.face_segments[face]
        rule = partial_face_rule(mesh, int(face), segments, disc.weak_form_degree)
        system.dirichlet_values[face] = project_to_face(
            problem.exterior_dirichlet, rule, disc.face_basis, t
        )
        system.dirichlet_faces[face] = True
    return system


# ============================================================================
# Solve
# ============================================================================

class TraceFactorization:
    """Sparse LU of the pruned trace matrix, reusable across right-hand sides."""

    def __init__(
        self,
        system: TraceSystem,
        pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE,
        quiet: bool = False,
    ):
        self.free = system.free_dofs
        self.fixed = system.fixed_dofs
        self.pivot_tolerance = pivot_tolerance
        rows = system.matrix[self.free]
        self.K_ff = rows[:, self.free].tocsc()
        self.K_fd = rows[:, self.fixed].tocsr()
        self.diagnostics = SolveDiagnostics(
            n_dofs=len(self.free),
            n_active_faces=int(np.sum(system.active_faces)),
            n_dirichlet_faces=int(np.sum(system.dirichlet_faces)),
        )
        self.lu = None
        if len(self.free) == 0:
            return
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", sparse_linalg.MatrixRankWarning)
                self.lu = sparse_linalg.splu(self.K_ff)
        except RuntimeError as e:
            raise SingularSystem(f"trace matrix is singular: {e}", pivot_ratio=0.0) from e

        pivots = np.abs(self.lu.U.diagonal())
        ratio = float(pivots.min() / pivots.max()) if pivots.max() > 0 else 0.0
        self.diagnostics.pivot_ratio = ratio
        if ratio == 0.0 or not np.isfinite(ratio):
            raise SingularSystem("trace matrix has a zero pivot", pivot_ratio=ratio)
        if ratio < pivot_tolerance:
            self.diagnostics.ill_conditioned = True
            if not quiet:
                console.print(
                    f"[yellow]Warning: trace matrix is ill-conditioned "
                    f"(pivot ratio {ratio:.2e} < {pivot_tolerance:.0e})[/yellow]"
                )

    def solve(self, system: TraceSystem) -> tuple[np.ndarray, SolveDiagnostics]:
        """Trace per face, shape (n_faces, nl), NaN on inactive faces."""
        trace = np.full(system.dof_map.shape, np.nan)
        trace[system.dirichlet_faces] = system.dirichlet_values[system.dirichlet_faces]
        diagnostics = SolveDiagnostics(**self.diagnostics.to_dict())
        if self.lu is None:
            diagnostics.residual = 0.0
            return trace, diagnostics

        fixed_values = system.dirichlet_values[system.dirichlet_faces].ravel()
        rhs = system.rhs[self.free] - self.K_fd @ fixed_values
        x = self.lu.solve(rhs)
        # one step of iterative refinement
        x += self.lu.solve(rhs - self.K_ff @ x)
        diagnostics.refinement_steps = 1

        scale = max(float(np.max(np.abs(rhs))), np.finfo(float).tiny)
        residual = float(np.max(np.abs(rhs - self.K_ff @ x))) / scale
        diagnostics.residual = residual
        if not np.isfinite(residual) or not np.all(np.isfinite(x)) or residual > RESIDUAL_TOLERANCE:
            raise SingularSystem(
                "trace solve failed its residual check",
                pivot_ratio=diagnostics.pivot_ratio,
                residual=residual,
            )

        flat = trace.ravel()
        flat[self.free] = x
        return flat.reshape(trace.shape), diagnostics


def prune_and_solve(
    system: TraceSystem,
    pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE,
    quiet: bool = False,
) -> tuple[np.ndarray, SolveDiagnostics]:
    """Drop inactive faces, eliminate Dirichlet dofs and solve for Λ."""
    return TraceFactorization(system, pivot_tolerance, quiet).solve(system)


# ============================================================================
# Back-substitution
# ============================================================================

def back_substitute(
    disc: Discretization,
    factors: dict[int, LocalSolverFactors],
    trace: np.ndarray,
    t: float = 0.0,
) -> SolutionField:
    """Recover (u, q) on every active element from the face trace."""
    mesh = disc.mesh
    nd = disc.element_basis.dim
    u = np.full((mesh.n_elements, nd), np.nan)
    q = np.full((mesh.n_elements, 2, nd), np.nan)
    interface = {}
    for element, local in factors.items():
        element_trace = np.nan_to_num(trace[mesh.element_faces[element]], nan=0.0).ravel()
        u[element], q[element] = local.solve(element_trace)
        recovered = local.interface_trace(u[element], q[element])
        if recovered is not None:
            interface[element] = recovered
    return SolutionField(
        degree=disc.p,
        u=u,
        q=q,
        trace=trace,
        element_kind=disc.classification.element_kind.copy(),
        time=t,
        interface_trace=interface,
    )


def conservativity_residual(system: TraceSystem, trace: np.ndarray) -> float:
    """Largest flux imbalance across a free face.

    Lagrange face bases sum to one, so summing the residual rows of a face
    gives ∫_f (F̂⁺·n⁺ + F̂⁻·n⁻) ds for the numerical flux F̂.
    """
    free_faces = system.active_faces & ~system.dirichlet_faces
    if not np.any(free_faces):
        return 0.0
    values = np.nan_to_num(trace.ravel(), nan=0.0)
    residual = system.matrix @ values - system.rhs
    per_face = residual[system.dof_map[free_faces]].sum(axis=1)
    return float(np.max(np.abs(per_face)))
