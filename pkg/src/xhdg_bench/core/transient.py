"""Backward Euler time stepping of the X-HDG system.

Each step solves the steady system with (1/Δt) M added to A_uu and
(1/Δt) M u_prev added to f_u. Element operators, their shifted LU factors
and the factorized trace matrix do not change between steps and are kept;
only loads and right-hand sides are recomputed.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from rich.console import Console

from .approximation import project_to_element
from .discretization import Discretization
from .global_system import (
    DEFAULT_PIVOT_TOLERANCE,
    SolutionField,
    TraceFactorization,
    back_substitute,
)
from .local_solver import StabilizationSpec
from .problem import ProblemDefinition, ScalarField
from .solver import XHDGSolver

console = Console(stderr=True)

# sample times within this fraction of Δt snap onto the nearest step
STEP_SNAP = 1e-6
INITIAL_METHODS = ("interpolate", "l2")


@dataclass(eq=False)
class TransientState:
    t: float
    dt: float
    u_prev: np.ndarray  # (n_elements, nd), NaN on void elements
    steps: int = 0

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"time step must be positive, got {self.dt}")


class TransientSolver:
    """Backward Euler integrator over one discretization.

    Args:
        disc: Discretization (geometry is time-independent).
        problem: Problem; its data may depend on t.
        spec: Stabilization.
        dt: Step size Δt.
        naive: Rebuild every operator and factorization each step.
    """

    def __init__(
        self,
        disc: Discretization,
        problem: ProblemDefinition,
        spec: StabilizationSpec,
        dt: float,
        pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE,
        quiet: bool = False,
        naive: bool = False,
    ):
        if dt <= 0.0:
            raise ValueError(f"time step must be positive, got {dt}")
        self.disc = disc
        self.problem = problem
        self.spec = spec
        self.dt = dt
        self.pivot_tolerance = pivot_tolerance
        self.quiet = quiet
        self.naive = naive
        self.solver = XHDGSolver(disc, problem, spec, pivot_tolerance, quiet)
        self._factorization: TraceFactorization | None = None

    def initial_state(
        self, u0: ScalarField | None = None, t0: float = 0.0, method: str = "interpolate"
    ) -> tuple[TransientState, SolutionField]:
        """Project u(·, t0) onto P_p on every active element.

        ``method`` is "interpolate" (nodal interpolant, exact at the element
        nodes) or "l2" (L2 projection over Ω_i).
        """
        if method not in INITIAL_METHODS:
            raise ValueError(f"unknown initial projection '{method}' (expected one of {INITIAL_METHODS})")
        if u0 is None:
            if self.problem.exact is None:
                raise ValueError("an initial condition is required when the problem has no exact solution")
            u0 = self.problem.exact.value
        disc = self.disc
        n, nd = disc.mesh.n_elements, disc.element_basis.dim
        u = np.full((n, nd), np.nan)
        for element in disc.active_elements:
            element = int(element)
            if method == "interpolate":
                vertices = disc.mesh.element_vertices(element)
                u[element] = disc.element_basis.interpolate(lambda points: u0(points, t0), vertices)
                continue
            rule = disc.rules(element).volume
            u[element] = project_to_element(u0, rule, disc.values_at(element, rule.points), t0)
        q = np.zeros((n, 2, nd))
        q[np.isnan(u[:, 0])] = np.nan
        field = SolutionField(
            degree=disc.p,
            u=u,
            q=q,
            trace=np.full((disc.mesh.n_faces, disc.face_basis.dim), np.nan),
            element_kind=disc.classification.element_kind.copy(),
            time=t0,
        )
        return TransientState(t=t0, dt=self.dt, u_prev=u), field

    def step(self, state: TransientState) -> tuple[TransientState, SolutionField]:
        """Advance one step of size Δt."""
        t_new = state.t + state.dt
        shift = 1.0 / state.dt
        solver = self.solver
        if self.naive:
            solver = XHDGSolver(self.disc, self.problem, self.spec, self.pivot_tolerance, self.quiet)

        factors = solver.condense(t_new, shift, state.u_prev)
        trace_system = solver.system(factors, t_new)
        factorization = self._factorization
        if factorization is None or self.naive:
            factorization = solver.factorize(trace_system)
            if not self.naive:
                self._factorization = factorization
        trace, _ = factorization.solve(trace_system)
        field = back_substitute(self.disc, factors, trace, t_new)
        return TransientState(t=t_new, dt=state.dt, u_prev=field.u, steps=state.steps + 1), field

    def run(
        self,
        t_end: float,
        sample_times: list[float] | None = None,
        callback: Callable[[float, SolutionField], None] | None = None,
        u0: ScalarField | None = None,
    ) -> list[SolutionField]:
        """Integrate from t = 0 to ``t_end`` and return the sampled fields.

        ``callback(t, field)`` is called at every sample time; t = 0 is the
        projected initial condition.
        """
        if t_end < 0.0:
            raise ValueError(f"end time must be non-negative, got {t_end}")
        n_steps = int(round(t_end / self.dt))
        wanted = {self._step_index(ts) for ts in (sample_times or []) if ts <= t_end + STEP_SNAP * self.dt}

        state, field = self.initial_state(u0)
        samples = []
        if 0 in wanted:
            samples.append(field)
            if callback:
                callback(field.time, field)
        for k in range(1, n_steps + 1):
            state, field = self.step(state)
            if k in wanted:
                samples.append(field)
                if callback:
                    callback(field.time, field)
        return samples

    def _step_index(self, t: float) -> int:
        index = int(round(t / self.dt))
        if abs(index * self.dt - t) > STEP_SNAP * self.dt + 1e-12 and not self.quiet:
            console.print(
                f"[yellow]Warning: sample time {t} is not a multiple of dt={self.dt}; "
                f"using t={index * self.dt:.6g}[/yellow]"
            )
        return index


# ============================================================================
# Sampling
# ============================================================================

def sampled_maximum(disc: Discretization, values: Callable[[int, np.ndarray], np.ndarray]) -> float:
    """Max of ``values(element, points)`` over every element's Ω_i lattice."""
    best = -np.inf
    for element in disc.active_elements:
        points = disc.lattice(int(element))
        if len(points):
            best = max(best, float(np.max(values(int(element), points))))
    return float(best) if np.isfinite(best) else 0.0


def pulse_height(disc: Discretization, field: SolutionField) -> float:
    """Maximum of u_h over the per-element sampling lattice restricted to Ω."""
    return sampled_maximum(disc, lambda e, pts: disc.evaluate(e, field.u[e], pts))


def exact_height(disc: Discretization, exact, t: float) -> float:
    """The same lattice maximum applied to an analytic field."""
    return sampled_maximum(disc, lambda e, pts: exact.value(pts, t))


def line_profile(disc: Discretization, field: SolutionField, x: float, ys: np.ndarray) -> np.ndarray:
    """u_h along the vertical line at ``x``; NaN strictly inside the void."""
    ys = np.asarray(ys, dtype=float)
    points = np.column_stack((np.full_like(ys, x), ys))
    elements = disc.mesh.locate(points)
    inside = disc.level_set(points) >= 0.0
    values = np.full(len(ys), np.nan)
    for k, (element, point) in enumerate(zip(elements, points)):
        if element < 0 or not inside[k] or not field.is_active(element):
            continue
        values[k] = disc.evaluate(int(element), field.u[element], point[None, :])[0]
    return values
