"""Trace assembly, Dirichlet imposition, solve and back-substitution."""

import numpy as np
import pytest

from xhdg_bench.core.discretization import Discretization
from xhdg_bench.core.errors import SingularSystem
from xhdg_bench.core.geometry import build_mesh, get_level_set
from xhdg_bench.core.global_system import (
    TraceFactorization,
    conservativity_residual,
    prune_and_solve,
)
from xhdg_bench.core.local_solver import StabilizationSpec
from xhdg_bench.core.postprocess import l2_error
from xhdg_bench.core.problem import ExpSine, manufactured_problem
from xhdg_bench.core.solver import XHDGSolver, solve_steady

from .conftest import polynomial_of_degree


def _solver(disc, problem, scheme="centered"):
    return XHDGSolver(disc, problem, StabilizationSpec(scheme, problem.viscosity), quiet=True)


class TestAssembly:
    def test_single_cell_dimensions(self):
        disc = Discretization(build_mesh(1), get_level_set("none"), 2)
        problem = manufactured_problem(ExpSine(), (1.0, 1.0), 1.0)
        solver = _solver(disc, problem)
        system = solver.system(solver.condense())
        assert system.matrix.shape == (15, 15)
        assert system.dirichlet_faces.sum() == 4
        assert len(system.free_dofs) == 3
        assert len(system.fixed_dofs) == 12

    def test_dirichlet_values_are_face_projections(self):
        exact = polynomial_of_degree(2)
        disc = Discretization(build_mesh(2), get_level_set("none"), 2)
        solver = _solver(disc, manufactured_problem(exact, (1.0, 1.0), 1.0))
        system = solver.system(solver.condense())
        mesh = disc.mesh
        for face in np.flatnonzero(system.dirichlet_faces):
            a, b = mesh.face_points(face)
            nodes = a + disc.face_basis.nodes[:, None] * (b - a)
            assert np.allclose(system.dirichlet_values[face], exact.value(nodes), atol=1e-12)

    def test_inactive_faces_are_pruned(self, circle_disc):
        solver = _solver(circle_disc, manufactured_problem(ExpSine(), (1.0, 1.0), 1.0))
        system = solver.system(solver.condense())
        inactive = system.dof_map[~system.active_faces].ravel()
        assert len(inactive) > 0
        assert not np.intersect1d(inactive, system.free_dofs).size
        assert system.matrix[inactive].nnz == 0


class TestSolve:
    def test_all_void(self):
        disc = Discretization(build_mesh(2), get_level_set("half_plane", point=(2.0, 0.0)), 1)
        result = solve_steady(disc, manufactured_problem(ExpSine(), (1.0, 1.0), 1.0), StabilizationSpec(), quiet=True)
        assert result.diagnostics.n_dofs == 0
        assert np.all(np.isnan(result.field.trace))
        assert np.all(np.isnan(result.field.u))

    def test_residual_and_conservativity(self, circle_disc):
        result = _solver(circle_disc, manufactured_problem(ExpSine(), (1.0, 1.0), 1.0)).solve()
        assert result.diagnostics.residual < 1e-9
        assert result.diagnostics.refinement_steps == 1
        assert result.conservativity < 1e-9
        assert np.all(np.isnan(result.field.trace[~np.isfinite(circle_disc.classification.face_intervals[:, 0])]))

    def test_diagnostics_to_dict(self, circle_disc):
        result = _solver(circle_disc, manufactured_problem(ExpSine(), (1.0, 1.0), 1.0)).solve()
        data = result.diagnostics.to_dict()
        assert data["n_dofs"] == result.diagnostics.n_dofs
        assert 0.0 < data["pivot_ratio"] <= 1.0

    def test_factorization_reuse(self, circle_disc):
        solver = _solver(circle_disc, manufactured_problem(ExpSine(), (1.0, 1.0), 1.0))
        system = solver.system(solver.condense())
        factorization = TraceFactorization(system, quiet=True)
        first, _ = factorization.solve(system)
        second, _ = prune_and_solve(system, quiet=True)
        assert np.allclose(np.nan_to_num(first), np.nan_to_num(second), atol=1e-12)
        assert conservativity_residual(system, first) < 1e-9


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("scheme", ["centered", "upwind"])
@pytest.mark.parametrize("level_set,interface", [
    ("none", "dirichlet"),
    ("half_plane", "dirichlet"),
    ("half_plane", "neumann"),
])
def test_patch_reproduces_polynomials(p, scheme, level_set, interface):
    exact = polynomial_of_degree(p)
    disc = Discretization(build_mesh(3), get_level_set(level_set), p)
    problem = manufactured_problem(exact, (1.0, 0.5), 0.3, interface)
    result = _solver(disc, problem, scheme).solve()
    assert l2_error(disc, result.field.u, exact) < 1e-9
    assert l2_error(disc, result.postprocessed.u, exact, basis=disc.basis(p + 1)) < 1e-9


def test_curved_patch_reproduces_polynomials():
    exact = polynomial_of_degree(2)
    disc = Discretization(build_mesh(4), get_level_set("circle"), 2)
    problem = manufactured_problem(exact, (1.0, 1.0), 1.0)
    result = _solver(disc, problem).solve()
    assert l2_error(disc, result.field.u, exact) < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("scheme", ["centered", "upwind"])
def test_patch_reproduces_quartics(scheme):
    exact = polynomial_of_degree(4)
    disc = Discretization(build_mesh(3), get_level_set("half_plane"), 4)
    problem = manufactured_problem(exact, (1.0, 0.5), 0.3)
    result = _solver(disc, problem, scheme).solve()
    assert l2_error(disc, result.field.u, exact) < 1e-9
    assert l2_error(disc, result.postprocessed.u, exact, basis=disc.basis(5)) < 1e-9


def _monolithic_solve(solver, problem):
    """Solve the uncondensed (u, q, Λ) system densely.

    Returns the trace per face and (u, q) per active element. Rows of
    inactive faces are pinned to zero.
    """
    disc = solver.disc
    system = solver.system(solver.condense())
    mesh = disc.mesh
    nd, nl = disc.element_basis.dim, disc.face_basis.dim
    n_local = 3 * nd
    elements = sorted(solver.operators)
    offset = len(elements) * n_local
    size = offset + mesh.n_faces * nl
    matrix = np.zeros((size, size))
    rhs = np.zeros(size)
    for i, element in enumerate(elements):
        op = solver.operators[element]
        local = np.arange(i * n_local, (i + 1) * n_local)
        traces = offset + system.dof_map[mesh.element_faces[element]].ravel()
        matrix[np.ix_(local, local)] = op.A
        matrix[np.ix_(local, traces)] = op.B
        rhs[local] = op.loads(problem)[0]
        for j, face in enumerate(mesh.element_faces[element]):
            if system.dirichlet_faces[face] or not system.active_faces[face]:
                continue
            rows = offset + system.dof_map[face]
            matrix[np.ix_(rows, local)] += op.C[j * nl:(j + 1) * nl]
            matrix[np.ix_(rows, traces)] += op.D[j * nl:(j + 1) * nl]
    for face in range(mesh.n_faces):
        rows = offset + system.dof_map[face]
        if system.dirichlet_faces[face]:
            matrix[rows, rows] = 1.0
            rhs[rows] = system.dirichlet_values[face]
        elif not system.active_faces[face]:
            matrix[rows, rows] = 1.0

    solution = np.linalg.solve(matrix, rhs)
    trace = solution[offset:].reshape(mesh.n_faces, nl)
    fields = {
        element: (
            solution[i * n_local:i * n_local + nd],
            solution[i * n_local + nd:(i + 1) * n_local].reshape(2, nd),
        )
        for i, element in enumerate(elements)
    }
    return trace, fields


def _assert_matches_monolithic(disc, problem, scheme):
    solver = _solver(disc, problem, scheme)
    result = solver.solve(postprocess=False)
    trace, fields = _monolithic_solve(solver, problem)

    active = disc.classification.active_faces
    assert np.allclose(trace[active], result.field.trace[active], atol=1e-9)
    for element, (u, q) in fields.items():
        assert np.allclose(u, result.field.u[element], atol=1e-9)
        assert np.allclose(q, result.field.q[element], atol=1e-9)


def test_matches_monolithic_solve():
    """Static condensation gives the same (u, q, Λ) as the uncondensed system."""
    disc = Discretization(build_mesh(2), get_level_set("none"), 1)
    problem = manufactured_problem(ExpSine(), (1.0, 0.5), 0.7)
    _assert_matches_monolithic(disc, problem, "upwind")


@pytest.mark.parametrize("interface", ["dirichlet", "neumann"])
def test_matches_monolithic_solve_on_the_circle(circle_disc, interface):
    problem = manufactured_problem(ExpSine(), (1.0, 1.0), 1.0, interface)
    _assert_matches_monolithic(circle_disc, problem, "centered")


def test_nearly_touching_interface_is_flagged(capsys):
    # the circle passes 1e-9 outside the vertex (0.25, 0.25), leaving slivers
    center = np.array([0.5, 0.5])
    radius = float(np.linalg.norm(center - 0.25)) - 1e-9
    disc = Discretization(build_mesh(4), get_level_set("circle", center=center, radius=radius), 2)
    problem = manufactured_problem(ExpSine(), (1.0, 1.0), 1.0)
    try:
        solver = XHDGSolver(disc, problem, StabilizationSpec(), pivot_tolerance=1e-6, quiet=False)
        result = solver.solve(postprocess=False)
    except SingularSystem as e:
        assert "trace" in str(e)
    else:
        assert result.diagnostics.ill_conditioned
        assert result.diagnostics.pivot_ratio < 1e-6
        assert "ill-conditioned" in capsys.readouterr().err
