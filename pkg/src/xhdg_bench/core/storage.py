"""Results directory layout and run manifests."""

import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from rich.console import Console

console = Console(stderr=True)

MANIFEST_DIR = "manifests"
FIELDS_DIR = "fields"


def get_results_directory(output_dir: str | Path | None = None) -> Path:
    """Results directory path (``results/`` under the current directory by default)."""
    if output_dir is None:
        return Path.cwd() / "results"
    return Path(output_dir)


def initialize_storage(output_dir: str | Path | None = None) -> Path:
    """Create the results directory structure.

    Creates:
        <output_dir>/
        ├── manifests/   # one JSON document per run
        └── fields/      # sampled solution fields

    Returns:
        Path to the results directory.
    """
    results = get_results_directory(output_dir)
    (results / MANIFEST_DIR).mkdir(parents=True, exist_ok=True)
    (results / FIELDS_DIR).mkdir(parents=True, exist_ok=True)
    return results


def generate_run_id() -> str:
    """Generate a unique run ID."""
    return str(uuid.uuid4())[:8]


def get_timestamp() -> str:
    """Get current timestamp in ISO 8601 format."""
    return datetime.now(timezone.utc).isoformat()


def save_manifest(
    run_id: str,
    command: str,
    config: dict[str, Any],
    status: str,
    outputs: list[str],
    wall_time: float,
    metadata: dict[str, Any] | None = None,
    output_dir: str | Path | None = None,
) -> Path:
    """Save a run manifest to JSON.

    Args:
        run_id: Unique run identifier.
        command: CLI command that produced the run (converge, pulse, solve).
        config: The configuration as a dictionary.
        status: ``ok`` or ``failed``.
        outputs: Files written by the run.
        wall_time: Wall-clock seconds.
        metadata: Additional data (diagnostics, failed rows).
        output_dir: Results directory.

    Returns:
        Path to the saved JSON file.
    """
    results = initialize_storage(output_dir)
    manifest = {
        "run_id": run_id,
        "command": command,
        "timestamp": get_timestamp(),
        "status": status,
        "wall_time": wall_time,
        "config": config,
        "outputs": outputs,
        "metadata": metadata or {},
    }
    file_path = results / MANIFEST_DIR / f"run_{run_id}.json"
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, ensure_ascii=False, default=_jsonable)
    return file_path


def _jsonable(value: Any) -> Any:
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def list_manifests(output_dir: str | Path | None = None) -> list[dict[str, Any]]:
    """Summaries of all stored runs, newest first."""
    manifest_dir = get_results_directory(output_dir) / MANIFEST_DIR
    if not manifest_dir.exists():
        return []

    runs = []
    for file_path in manifest_dir.glob("run_*.json"):
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            console.print(f"[yellow]Warning: skipping unreadable manifest {file_path.name}: {e}[/yellow]")
            continue
        runs.append({
            "run_id": data.get("run_id"),
            "command": data.get("command"),
            "case": data.get("config", {}).get("case"),
            "flux": data.get("config", {}).get("flux"),
            "status": data.get("status"),
            "timestamp": data.get("timestamp", ""),
            "wall_time": data.get("wall_time"),
            "file": str(file_path),
        })

    runs.sort(key=lambda x: x.get("timestamp", ""), reverse=True)
    return runs


def load_manifest(run_id: str, output_dir: str | Path | None = None) -> dict[str, Any] | None:
    """Load one manifest, or None if the run is unknown."""
    file_path = get_results_directory(output_dir) / MANIFEST_DIR / f"run_{run_id}.json"
    if not file_path.exists():
        return None
    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)
