"""xhdg: unfitted HDG convection-diffusion benchmarks.

Main CLI application using Typer.

Commands:
    xhdg converge           Convergence sweep over (p, n); writes the error/order CSV
    xhdg pulse              Transient Gaussian pulse; writes heights and snapshots
    xhdg solve              Single steady solve; exports the sampled field
    xhdg cases              List the benchmark cases
    xhdg config init        Write a case's default configuration
    xhdg config show        Display a configuration file
    xhdg runs               List stored run manifests
"""

from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from . import __app_name__, __version__
from .core.cases import get_case, list_cases
from .core.config import (
    DEFAULT_CASE,
    BenchmarkConfig,
    apply_overrides,
    default_config,
    load_config,
    save_config,
)
from .core.errors import XHDGError
from .core.runner import RunResult, run_converge, run_pulse, run_solve
from .core.storage import list_manifests

# Initialize Typer app
app = typer.Typer(
    name=__app_name__,
    help="X-HDG convection-diffusion solver and benchmark harness",
    add_completion=True,
    rich_markup_mode="rich",
)

# Config subcommand group
config_app = typer.Typer(
    name="config",
    help="Create and inspect benchmark configurations",
)
app.add_typer(config_app, name="config")

console = Console()


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold]xhdg[/bold] version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Annotated[
        Optional[bool],
        typer.Option(
            "--version",
            "-v",
            help="Show version and exit.",
            callback=version_callback,
            is_eager=True,
        ),
    ] = None,
) -> None:
    """Solve convection-diffusion on cut meshes and reproduce the benchmarks."""
    pass


# ============================================================================
# Shared options
# ============================================================================

ConfigOption = Annotated[
    Optional[Path],
    typer.Option("--config", "-c", help="JSON configuration file.", exists=True, readable=True),
]
CaseOption = Annotated[
    Optional[str],
    typer.Option("--case", help="Case to run when no --config is given (see 'xhdg cases')."),
]
DegreeOption = Annotated[
    Optional[list[int]],
    typer.Option("--p", "-p", help="Polynomial degree; repeat for several."),
]
MeshOption = Annotated[
    Optional[list[int]],
    typer.Option("--n", "-n", help="Cells per side; repeat for several."),
]
FluxOption = Annotated[
    Optional[str],
    typer.Option("--flux", "-f", help="Stabilization: 'centered' or 'upwind'."),
]
InterfaceOption = Annotated[
    Optional[str],
    typer.Option("--interface-bc", help="Interface condition: 'dirichlet' or 'neumann'."),
]
OutputOption = Annotated[
    Optional[Path],
    typer.Option("--output", "-o", help="Results directory."),
]
ReportOption = Annotated[
    Optional[bool],
    typer.Option("--report/--no-report", help="Also render a self-contained HTML report."),
]
QuietOption = Annotated[
    bool,
    typer.Option("--quiet", "-q", help="No panels; progress to stderr."),
]


def _resolve_config(config_path: Path | None, case: str | None, **overrides) -> BenchmarkConfig:
    """Load --config or the case defaults, then apply command-line overrides."""
    if config_path is not None and case is not None:
        raise typer.BadParameter("use either --config or --case, not both")
    config = load_config(config_path) if config_path is not None else default_config(case or DEFAULT_CASE)
    if overrides.get("output_dir") is not None:
        overrides["output_dir"] = str(overrides["output_dir"])
    return apply_overrides(config, **overrides)


def _execute(runner, config_path, case, quiet, **overrides) -> RunResult:
    try:
        config = _resolve_config(config_path, case, **overrides)
        return runner(config, quiet=quiet)
    except (XHDGError, OSError) as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(1)


# ============================================================================
# Run Commands
# ============================================================================

@app.command()
def converge(
    config: ConfigOption = None,
    case: CaseOption = None,
    p: DegreeOption = None,
    n: MeshOption = None,
    flux: FluxOption = None,
    interface_bc: InterfaceOption = None,
    output: OutputOption = None,
    report: ReportOption = None,
    export_fields: Annotated[
        Optional[bool],
        typer.Option("--export-fields/--no-export-fields", help="Write the sampled field of every solve."),
    ] = None,
    quiet: QuietOption = False,
) -> None:
    """Run a convergence sweep and write p,n,err_u,order_u,err_ustar,order_ustar.

    Failed solves are recorded in their row; the command then exits with 2.

    Examples:
        xhdg converge --config configs/circle_diffusion_centered.json
        xhdg converge --case circle-diffusion --p 2 --n 8 --n 16 --n 32
    """
    result = _execute(
        run_converge,
        config,
        case,
        quiet,
        degrees=p or None,
        meshes=n or None,
        flux=flux,
        interface_bc=interface_bc,
        output_dir=output,
        report=report,
        export_fields=export_fields,
    )
    if result.exit_code:
        console.print("[yellow]Warning: some rows failed; see the table and the manifest.[/yellow]")
    raise typer.Exit(result.exit_code)


@app.command()
def pulse(
    config: ConfigOption = None,
    p: DegreeOption = None,
    n: MeshOption = None,
    flux: FluxOption = None,
    dt: Annotated[Optional[float], typer.Option("--dt", help="Time step.")] = None,
    t_end: Annotated[Optional[float], typer.Option("--t-end", help="Final time.")] = None,
    output: OutputOption = None,
    report: ReportOption = None,
    quiet: QuietOption = False,
) -> None:
    """Transport the Gaussian pulse and record its height over time.

    Examples:
        xhdg pulse --config configs/pulse_upwind.json
        xhdg pulse --p 2 --n 32 --dt 0.0025
    """
    _execute(
        run_pulse,
        config,
        None if config else "pulse",
        quiet,
        degrees=p or None,
        meshes=n or None,
        flux=flux,
        dt=dt,
        t_end=t_end,
        output_dir=output,
        report=report,
    )


@app.command()
def solve(
    config: ConfigOption = None,
    case: CaseOption = None,
    p: Annotated[Optional[int], typer.Option("--p", "-p", help="Polynomial degree.")] = None,
    n: Annotated[Optional[int], typer.Option("--n", "-n", help="Cells per side.")] = None,
    flux: FluxOption = None,
    interface_bc: InterfaceOption = None,
    output: OutputOption = None,
    quiet: QuietOption = False,
) -> None:
    """Solve one steady problem and export the sampled field.

    Examples:
        xhdg solve --case peanut --p 2 --n 16 --flux upwind
    """
    _execute(
        run_solve,
        config,
        case,
        quiet,
        degrees=[p] if p is not None else None,
        meshes=[n] if n is not None else None,
        flux=flux,
        interface_bc=interface_bc,
        output_dir=output,
    )


# ============================================================================
# Listing Commands
# ============================================================================

@app.command()
def cases() -> None:
    """List the registered benchmark cases."""
    table = Table(title="Benchmark Cases", show_header=True, header_style="bold cyan")
    table.add_column("Case")
    table.add_column("Kind")
    table.add_column("Description")
    for name in list_cases():
        case = get_case(name)
        table.add_row(name, "transient" if case.transient else "steady", case.get_description())
    console.print(table)


@app.command()
def runs(
    output: OutputOption = None,
) -> None:
    """List stored runs (newest first)."""
    manifests = list_manifests(output)
    if not manifests:
        console.print("[dim]No runs found.[/dim]")
        console.print("[dim]Run 'xhdg converge' or 'xhdg pulse' to record your first run.[/dim]")
        return

    table = Table(title="Runs", show_header=True, header_style="bold cyan")
    table.add_column("Run ID", style="dim")
    table.add_column("Command")
    table.add_column("Case")
    table.add_column("Flux")
    table.add_column("Status", justify="center")
    table.add_column("Time", justify="right")
    table.add_column("Timestamp")
    for run in manifests:
        status = run.get("status")
        status_display = "[green]✓ ok[/green]" if status == "ok" else f"[red]✗ {status}[/red]"
        wall_time = run.get("wall_time")
        table.add_row(
            run.get("run_id") or "?",
            run.get("command") or "?",
            run.get("case") or "—",
            run.get("flux") or "—",
            status_display,
            f"{wall_time:.1f}s" if wall_time is not None else "—",
            run.get("timestamp", "")[:19] or "—",
        )
    console.print(table)


# ============================================================================
# Config Commands
# ============================================================================

@config_app.command(name="init")
def config_init(
    case: Annotated[str, typer.Argument(help="Case name (see 'xhdg cases').")],
    path: Annotated[Path, typer.Argument(help="Where to write the JSON file.")],
    flux: FluxOption = None,
    interface_bc: InterfaceOption = None,
) -> None:
    """Write the default configuration of a case.

    Examples:
        xhdg config init peanut configs/my_peanut.json --flux upwind
    """
    try:
        config = apply_overrides(default_config(case), flux=flux, interface_bc=interface_bc)
    except XHDGError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(1)
    saved = save_config(config, path)
    console.print(Panel(
        f"[green]✓ Configuration written[/green]\n\n"
        f"Case: [bold]{config.case}[/bold]\n"
        f"Flux: {config.flux}\n"
        f"Interface: {config.interface_bc}",
        title="Config Saved",
        border_style="green",
    ))
    console.print(f"[dim]Saved to: {saved}[/dim]")


@config_app.command(name="show")
def config_show(
    path: Annotated[Path, typer.Argument(help="Configuration file.", exists=True, readable=True)],
) -> None:
    """Show a configuration with defaults filled in."""
    try:
        config = load_config(path)
    except XHDGError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(1)
    lines = [f"{key}: [bold]{value}[/bold]" for key, value in config.to_dict().items()]
    console.print(Panel(
        "\n".join(lines) + f"\n\n[dim]Config file: {path}[/dim]",
        title=f"⚙️ {config.name}",
        border_style="cyan",
    ))


if __name__ == "__main__":
    app()
