"""Benchmark runs: convergence sweeps, the transient pulse and single solves.

Each run shows a header panel, streams one progress line per solve, writes
its CSV outputs and a JSON manifest, and ends with a footer panel. With
``quiet=True`` panels are skipped and progress goes to stderr.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from ..output.renderer import render_convergence_html, render_pulse_html, save_report
from .cases import BenchmarkCase, get_case
from .config import BenchmarkConfig
from .discretization import Discretization
from .errors import ConfigError, XHDGError
from .geometry import build_mesh
from .global_system import SolutionField
from .local_solver import StabilizationSpec
from .postprocess import ConvergenceReport, ConvergenceRow, convergence_orders, solution_errors
from .solver import SteadyResult, XHDGSolver
from .storage import FIELDS_DIR, generate_run_id, initialize_storage, save_manifest
from .transient import TransientSolver, exact_height, line_profile, pulse_height

console = Console()

FLOAT_FORMAT = "%.6e"
PROFILE_POINTS = 201


@dataclass
class RunResult:
    """Outcome of one CLI run."""
    run_id: str
    command: str
    status: str
    wall_time: float
    outputs: list[Path] = field(default_factory=list)
    manifest_path: Path | None = None
    report: ConvergenceReport | None = None
    heights: list[dict[str, float]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 2


# ============================================================================
# Building blocks
# ============================================================================

def resolve_case(config: BenchmarkConfig) -> BenchmarkCase:
    case = get_case(config.case)
    if case is None:
        raise ConfigError(f"unknown case '{config.case}'")
    return case


def build_discretization(config: BenchmarkConfig, case: BenchmarkCase, p: int, n: int) -> Discretization:
    mesh = build_mesh(n, case.box(config))
    return Discretization(mesh, case.level_set(config), p, config.geometry_order)


def stabilization(config: BenchmarkConfig) -> StabilizationSpec:
    return StabilizationSpec(
        scheme=config.flux, viscosity=config.viscosity, length_scale=config.length_scale
    )


def solve_case(
    config: BenchmarkConfig, case: BenchmarkCase, p: int, n: int, quiet: bool = False
) -> tuple[Discretization, SteadyResult]:
    """Steady solve of ``case`` at degree p on the n x n mesh."""
    disc = build_discretization(config, case, p, n)
    solver = XHDGSolver(disc, case.problem(config), stabilization(config), config.pivot_tolerance, quiet)
    return disc, solver.solve()


def export_field(disc: Discretization, solution: SolutionField, path: Path, resolution: int = 9) -> Path:
    """Write u sampled on each element's lattice inside Ω as x,y,u,element,class."""
    frames = []
    for element in disc.active_elements:
        element = int(element)
        points = disc.lattice(element, resolution)
        if not len(points):
            continue
        frames.append(pd.DataFrame({
            "x": points[:, 0],
            "y": points[:, 1],
            "u": disc.evaluate(element, solution.u[element], points),
            "element": element,
            "class": disc.kind(element).name.lower(),
        }))
    columns = ["x", "y", "u", "element", "class"]
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=columns)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, columns=columns, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise OSError(f"could not write field to {path}: {e}") from e
    return path


def _header(command: str, config: BenchmarkConfig, output_console: Console) -> None:
    header = Text()
    header.append("● ", style="cyan bold")
    header.append(command, style="bold")
    header.append(f"  {config.case}  flux={config.flux}  interface={config.interface_bc}", style="dim")
    output_console.print(Panel(header, border_style="cyan", padding=(0, 1)))


def _footer(status: str, wall_time: float, run_id: str, output_console: Console) -> None:
    footer = Text()
    if status == "ok":
        footer.append("✓ ", style="green bold")
        footer.append("Complete", style="green")
    else:
        footer.append("✗ ", style="red bold")
        footer.append("Completed with failures", style="red")
    footer.append(f"  │  {wall_time:.1f}s", style="dim")
    footer.append(f"  │  Run: {run_id}", style="dim")
    output_console.print(Panel(footer, border_style="green" if status == "ok" else "red", padding=(0, 1)))


def _fmt(value: float | None, spec: str = ".3e") -> str:
    return "—" if value is None else format(value, spec)


def convergence_table(report: ConvergenceReport) -> Table:
    table = Table(
        title=f"Convergence: {report.case} ({report.flux}, {report.interface_bc})",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("p", justify="center")
    table.add_column("n", justify="right")
    table.add_column("‖u−u_h‖", justify="right")
    table.add_column("order", justify="right")
    table.add_column("‖u−u*‖", justify="right")
    table.add_column("order", justify="right")
    for row in report.rows:
        if not row.ok:
            table.add_row(str(row.p), str(row.n), "[red]failed[/red]", "—", "—", "—")
            continue
        table.add_row(
            str(row.p),
            str(row.n),
            _fmt(row.err_u),
            _fmt(row.order_u, ".2f"),
            _fmt(row.err_ustar),
            _fmt(row.order_ustar, ".2f"),
        )
    return table


def _settings(config: BenchmarkConfig) -> dict[str, Any]:
    return {
        "case": config.case,
        "flux": config.flux,
        "interface": config.interface_bc,
        "ν": config.viscosity,
        "c": tuple(config.velocity),
        "level set": config.level_set,
        "box": tuple(config.box),
    }


# ============================================================================
# Commands
# ============================================================================

def run_converge(config: BenchmarkConfig, quiet: bool = False) -> RunResult:
    """Sweep every (p, n) and write the error/order table as CSV.

    A failed solve is recorded in its row and the sweep continues; the run
    status is then ``failed`` (exit code 2).
    """
    case = resolve_case(config)
    if case.transient:
        raise ConfigError(f"case '{case.name}' is transient; use the pulse command")
    output_console = Console(stderr=True) if quiet else console
    run_id = generate_run_id()
    results_dir = initialize_storage(config.output_dir)
    start_time = time.perf_counter()
    if not quiet:
        _header("converge", config, output_console)

    outputs: list[Path] = []
    rows: list[ConvergenceRow] = []
    for p in sorted(config.degrees):
        for n in config.meshes:
            row = ConvergenceRow(p=p, n=n)
            solve_start = time.perf_counter()
            try:
                disc, result = solve_case(config, case, p, n, quiet)
                exact = case.exact_solution(config)
                row.err_u, row.err_ustar = solution_errors(disc, result.field, result.postprocessed, exact)
                row.diagnostics = {**result.diagnostics.to_dict(), "conservativity": result.conservativity}
                if config.export_fields:
                    path = results_dir / FIELDS_DIR / f"{config.name}_p{p}_n{n}.csv"
                    outputs.append(export_field(disc, result.field, path))
            except XHDGError as e:
                row.status = "failed"
                row.message = str(e)
            row.elapsed = time.perf_counter() - solve_start
            rows.append(row)
            if row.ok:
                output_console.print(
                    f"[dim]  p={p} n={n:<3} err_u={row.err_u:.3e} err_u*={row.err_ustar:.3e} "
                    f"({row.elapsed:.1f}s)[/dim]"
                )
            else:
                output_console.print(f"[red]  ✗ p={p} n={n}: {row.message}[/red]")

    convergence_orders(rows)
    report = ConvergenceReport(case=config.case, flux=config.flux, interface_bc=config.interface_bc, rows=rows)
    csv_path = results_dir / f"{config.name}.csv"
    report.to_csv(csv_path)
    outputs.insert(0, csv_path)
    if config.report:
        html = render_convergence_html(report, _settings(config))
        outputs.append(save_report(html, results_dir / f"{config.name}.html"))

    status = "failed" if report.failed else "ok"
    wall_time = time.perf_counter() - start_time
    manifest = save_manifest(
        run_id,
        "converge",
        config.to_dict(),
        status,
        [str(p) for p in outputs],
        wall_time,
        metadata={"rows": [row.to_dict() for row in rows]},
        output_dir=results_dir,
    )
    if not quiet:
        output_console.print(convergence_table(report))
        output_console.print(f"[dim]Table written to {csv_path}[/dim]")
        _footer(status, wall_time, run_id, output_console)
    return RunResult(
        run_id=run_id,
        command="converge",
        status=status,
        wall_time=wall_time,
        outputs=outputs,
        manifest_path=manifest,
        report=report,
    )


def run_pulse(config: BenchmarkConfig, quiet: bool = False) -> RunResult:
    """Transport the Gaussian pulse and record its height at the sample times."""
    case = resolve_case(config)
    if not case.transient:
        raise ConfigError(f"case '{case.name}' is steady; use the converge or solve command")
    output_console = Console(stderr=True) if quiet else console
    if len(config.degrees) > 1 or len(config.meshes) > 1:
        output_console.print(
            f"[yellow]Warning: pulse runs one (p, n); using p={config.degrees[0]}, n={config.meshes[0]}[/yellow]"
        )
    p, n = config.degrees[0], config.meshes[0]
    run_id = generate_run_id()
    results_dir = initialize_storage(config.output_dir)
    start_time = time.perf_counter()
    if not quiet:
        _header("pulse", config, output_console)

    disc = build_discretization(config, case, p, n)
    problem = case.problem(config)
    exact = case.exact_solution(config)
    integrator = TransientSolver(
        disc, problem, stabilization(config), config.dt, config.pivot_tolerance, quiet
    )

    sample_times = sorted({t for t in config.sample_times if t <= config.t_end})
    profile_time = config.profile_time if config.profile_x is not None else None
    wanted = set(sample_times) | {0.0, config.t_end}
    if profile_time is not None and profile_time <= config.t_end:
        wanted.add(profile_time)

    heights: list[dict[str, float]] = []
    outputs: list[Path] = []
    profile_frame = None

    def record(t: float, solution: SolutionField) -> None:
        nonlocal profile_frame
        if any(np.isclose(t, s, atol=0.5 * config.dt) for s in sample_times):
            entry = {"t": t, "height": pulse_height(disc, solution), "exact_height": exact_height(disc, exact, t)}
            heights.append(entry)
            output_console.print(
                f"[dim]  t={t:<6.4g} height={entry['height']:.4f} exact={entry['exact_height']:.4f}[/dim]"
            )
        if np.isclose(t, 0.0) or np.isclose(t, config.t_end, atol=0.5 * config.dt):
            path = results_dir / FIELDS_DIR / f"{config.name}_t{t:.4g}.csv"
            outputs.append(export_field(disc, solution, path))
        if profile_time is not None and np.isclose(t, profile_time, atol=0.5 * config.dt):
            box = case.box(config)
            ys = np.linspace(box.y_min, box.y_max, PROFILE_POINTS)
            points = np.column_stack((np.full_like(ys, config.profile_x), ys))
            profile_frame = pd.DataFrame({
                "y": ys,
                "u": line_profile(disc, solution, config.profile_x, ys),
                "u_exact": exact.value(points, t),
            })

    integrator.run(config.t_end, sorted(wanted), callback=record)

    heights_path = results_dir / f"{config.name}_heights.csv"
    pd.DataFrame(heights, columns=["t", "height", "exact_height"]).to_csv(
        heights_path, index=False, float_format=FLOAT_FORMAT
    )
    outputs.insert(0, heights_path)
    if profile_frame is not None:
        profile_path = results_dir / f"{config.name}_profile.csv"
        profile_frame.to_csv(profile_path, index=False, float_format=FLOAT_FORMAT, na_rep="-")
        outputs.append(profile_path)
    if config.report:
        outputs.append(save_report(render_pulse_html(heights, _settings(config)), results_dir / f"{config.name}.html"))

    wall_time = time.perf_counter() - start_time
    manifest = save_manifest(
        run_id,
        "pulse",
        config.to_dict(),
        "ok",
        [str(p) for p in outputs],
        wall_time,
        metadata={"heights": heights, "p": p, "n": n},
        output_dir=results_dir,
    )
    if not quiet:
        table = Table(title="Pulse height", show_header=True, header_style="bold cyan")
        table.add_column("t", justify="right")
        table.add_column("height", justify="right")
        table.add_column("exact", justify="right")
        for entry in heights:
            table.add_row(f"{entry['t']:.4g}", f"{entry['height']:.4f}", f"{entry['exact_height']:.4f}")
        output_console.print(table)
        _footer("ok", wall_time, run_id, output_console)
    return RunResult(
        run_id=run_id,
        command="pulse",
        status="ok",
        wall_time=wall_time,
        outputs=outputs,
        manifest_path=manifest,
        heights=heights,
    )


def run_solve(config: BenchmarkConfig, quiet: bool = False) -> RunResult:
    """Single steady solve at the first (p, n); always exports the field."""
    case = resolve_case(config)
    if case.transient:
        raise ConfigError(f"case '{case.name}' is transient; use the pulse command")
    output_console = Console(stderr=True) if quiet else console
    p, n = config.degrees[0], config.meshes[0]
    run_id = generate_run_id()
    results_dir = initialize_storage(config.output_dir)
    start_time = time.perf_counter()
    if not quiet:
        _header("solve", config, output_console)

    disc, result = solve_case(config, case, p, n, quiet)
    err_u, err_ustar = solution_errors(disc, result.field, result.postprocessed, case.exact_solution(config))
    field_path = export_field(disc, result.field, results_dir / FIELDS_DIR / f"{config.name}_p{p}_n{n}.csv")
    counts = disc.summary()
    output_console.print(
        f"[dim]  elements: {counts['standard']} standard, {counts['cut']} cut, {counts['void']} void[/dim]"
    )
    output_console.print(
        f"[dim]  err_u={err_u:.3e} err_u*={err_ustar:.3e} pivot ratio={result.diagnostics.pivot_ratio:.2e}[/dim]"
    )

    wall_time = time.perf_counter() - start_time
    metadata = {
        "p": p,
        "n": n,
        "err_u": err_u,
        "err_ustar": err_ustar,
        "counts": counts,
        "diagnostics": result.diagnostics.to_dict(),
        "conservativity": result.conservativity,
        "timings": result.timings,
    }
    manifest = save_manifest(
        run_id, "solve", config.to_dict(), "ok", [str(field_path)], wall_time, metadata, results_dir
    )
    if not quiet:
        _footer("ok", wall_time, run_id, output_console)
    return RunResult(
        run_id=run_id,
        command="solve",
        status="ok",
        wall_time=wall_time,
        outputs=[field_path],
        manifest_path=manifest,
    )
