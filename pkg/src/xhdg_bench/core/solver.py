"""Steady X-HDG pipeline: local operators, condensation, trace solve,
back-substitution and postprocessing."""

import time
from dataclasses import dataclass, field

import numpy as np

from .discretization import Discretization
from .global_system import (
    DEFAULT_PIVOT_TOLERANCE,
    SolutionField,
    SolveDiagnostics,
    TraceFactorization,
    TraceSystem,
    assemble,
    back_substitute,
    conservativity_residual,
    impose_exterior_dirichlet,
)
from .local_solver import LocalOperator, LocalSolverFactors, StabilizationSpec, build_local_operator
from .postprocess import PostprocessedField, superconverge
from .problem import ProblemDefinition


@dataclass(eq=False)
class SteadyResult:
    field: SolutionField
    postprocessed: PostprocessedField | None
    diagnostics: SolveDiagnostics
    conservativity: float = float("nan")
    timings: dict[str, float] = field(default_factory=dict)


class XHDGSolver:
    """Solver bound to one discretization, problem and stabilization.

    Local operators are built on first use and kept for later solves, so a
    time loop only recomputes loads.
    """

    def __init__(
        self,
        disc: Discretization,
        problem: ProblemDefinition,
        spec: StabilizationSpec,
        pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE,
        quiet: bool = False,
    ):
        self.disc = disc
        self.problem = problem
        self.spec = spec
        self.pivot_tolerance = pivot_tolerance
        self.quiet = quiet
        self._operators: dict[int, LocalOperator] | None = None

    @property
    def operators(self) -> dict[int, LocalOperator]:
        if self._operators is None:
            self._operators = {
                int(e): build_local_operator(self.disc, int(e), self.problem, self.spec)
                for e in self.disc.active_elements
            }
        return self._operators

    def condense(
        self,
        t: float = 0.0,
        shift: float = 0.0,
        previous: np.ndarray | None = None,
    ) -> dict[int, LocalSolverFactors]:
        """Condensed factors of every active element.

        ``previous`` holds the u coefficients of the last time level, one row
        per element.
        """
        return {
            e: op.condense(self.problem, t, shift, None if previous is None else previous[e])
            for e, op in self.operators.items()
        }

    def system(self, factors: dict[int, LocalSolverFactors], t: float = 0.0) -> TraceSystem:
        trace_system = assemble(self.disc, factors)
        return impose_exterior_dirichlet(self.disc, trace_system, self.problem, t)

    def factorize(self, trace_system: TraceSystem) -> TraceFactorization:
        return TraceFactorization(trace_system, self.pivot_tolerance, self.quiet)

    def solve(self, t: float = 0.0, postprocess: bool = True) -> SteadyResult:
        timings = {}
        start = time.perf_counter()
        factors = self.condense(t)
        timings["local"] = time.perf_counter() - start

        start = time.perf_counter()
        trace_system = self.system(factors, t)
        trace, diagnostics = self.factorize(trace_system).solve(trace_system)
        timings["global"] = time.perf_counter() - start

        start = time.perf_counter()
        solution = back_substitute(self.disc, factors, trace, t)
        post = superconverge(self.disc, solution, self.problem.viscosity) if postprocess else None
        timings["postprocess"] = time.perf_counter() - start

        return SteadyResult(
            field=solution,
            postprocessed=post,
            diagnostics=diagnostics,
            conservativity=conservativity_residual(trace_system, trace),
            timings=timings,
        )


def solve_steady(
    disc: Discretization,
    problem: ProblemDefinition,
    spec: StabilizationSpec,
    pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE,
    quiet: bool = False,
) -> SteadyResult:
    """One-shot steady solve."""
    return XHDGSolver(disc, problem, spec, pivot_tolerance, quiet).solve()
