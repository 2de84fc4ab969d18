"""HTML report renderer.

Renders a convergence sweep or a pulse time series into a single
self-contained HTML file (inline CSS, no external assets).
"""

import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from jinja2 import BaseLoader, Environment
from rich.console import Console

from ..core.postprocess import ConvergenceReport

console = Console()


# ============================================================================
# HTML Template (Inlined for Single-File Output)
# ============================================================================

HTML_TEMPLATE = '''<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>xhdg: {{ title }}</title>
    <style>
        *, *::before, *::after { box-sizing: border-box; margin: 0; padding: 0; }

        :root {
            --bg-primary: #0d1117;
            --bg-secondary: #161b22;
            --border-color: #30363d;
            --text-primary: #e6edf3;
            --text-secondary: #8b949e;
            --accent-green: #3fb950;
            --accent-red: #f85149;
            --accent-blue: #58a6ff;
        }

        body {
            font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Helvetica, Arial, sans-serif;
            background: var(--bg-primary);
            color: var(--text-primary);
            line-height: 1.6;
        }

        .container { max-width: 1000px; margin: 0 auto; padding: 2rem; }

        .header {
            display: flex;
            justify-content: space-between;
            padding-bottom: 1.5rem;
            border-bottom: 1px solid var(--border-color);
            margin-bottom: 2rem;
        }

        .logo { font-size: 1.5rem; font-weight: 700; color: var(--accent-blue); }
        .meta { text-align: right; color: var(--text-secondary); font-size: 0.875rem; }

        .section {
            background: var(--bg-secondary);
            border: 1px solid var(--border-color);
            border-radius: 12px;
            margin-bottom: 1.5rem;
            padding: 1.25rem;
        }

        .section h2 { font-size: 1.1rem; margin-bottom: 1rem; }

        table { width: 100%; border-collapse: collapse; font-family: ui-monospace, monospace; font-size: 0.875rem; }
        th { text-align: right; color: var(--accent-blue); border-bottom: 1px solid var(--border-color); padding: 0.4rem; }
        td { text-align: right; padding: 0.3rem 0.4rem; }
        tr.group td { border-top: 1px solid var(--border-color); }
        tr.failed td { color: var(--accent-red); }

        .badge { display: inline-block; padding: 0.2rem 0.7rem; border-radius: 20px; font-size: 0.75rem; font-weight: 600; }
        .badge.ok { background: var(--accent-green); color: #000; }
        .badge.failed { background: var(--accent-red); color: #fff; }

        dl { display: grid; grid-template-columns: max-content 1fr; gap: 0.25rem 1rem; font-size: 0.875rem; }
        dt { color: var(--text-secondary); }
    </style>
</head>
<body>
<div class="container">
    <div class="header">
        <div class="logo">xhdg · {{ title }}</div>
        <div class="meta">{{ timestamp }}<br><span class="badge {{ status }}">{{ status }}</span></div>
    </div>

    <div class="section">
        <h2>Configuration</h2>
        <dl>
        {% for key, value in settings %}
            <dt>{{ key }}</dt><dd>{{ value }}</dd>
        {% endfor %}
        </dl>
    </div>

    <div class="section">
        <h2>{{ table_title }}</h2>
        <table>
            <thead><tr>{% for column in columns %}<th>{{ column }}</th>{% endfor %}</tr></thead>
            <tbody>
            {% for row in rows %}
                <tr class="{{ row.css }}">{% for cell in row.cells %}<td>{{ cell }}</td>{% endfor %}</tr>
            {% endfor %}
            </tbody>
        </table>
    </div>

    {% if notes %}
    <div class="section">
        <h2>Notes</h2>
        <ul>{% for note in notes %}<li>{{ note }}</li>{% endfor %}</ul>
    </div>
    {% endif %}
</div>
</body>
</html>
'''


# ============================================================================
# Helper Functions
# ============================================================================

def format_number(value: float | None, spec: str = ".3e") -> str:
    """Fixed-format number, '-' for missing values."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return format(value, spec)


def _render(**context: Any) -> str:
    env = Environment(loader=BaseLoader(), autoescape=True)
    template = env.from_string(HTML_TEMPLATE)
    return template.render(
        timestamp=datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M UTC"),
        **context,
    )


# ============================================================================
# Main Render Functions
# ============================================================================

def render_convergence_html(report: ConvergenceReport, settings: dict[str, Any]) -> str:
    """Render a convergence sweep in the error/order table layout."""
    rows = []
    previous_p = None
    for row in report.rows:
        css = "group" if previous_p is not None and row.p != previous_p else ""
        if not row.ok:
            css += " failed"
        rows.append({
            "css": css.strip(),
            "cells": [
                row.p if row.p != previous_p else "",
                row.n,
                format_number(row.err_u),
                format_number(row.order_u, ".2f"),
                format_number(row.err_ustar),
                format_number(row.order_ustar, ".2f"),
            ],
        })
        previous_p = row.p
    notes = [f"p={row.p}, n={row.n}: {row.message}" for row in report.rows if not row.ok]
    return _render(
        title=f"{report.case} ({report.flux}, {report.interface_bc})",
        status="failed" if report.failed else "ok",
        settings=list(settings.items()),
        table_title="Convergence",
        columns=["p", "n", "‖u−u_h‖", "order", "‖u−u*‖", "order"],
        rows=rows,
        notes=notes,
    )


def render_pulse_html(heights: list[dict[str, float]], settings: dict[str, Any]) -> str:
    """Render the pulse height time series."""
    rows = [
        {
            "css": "",
            "cells": [
                format_number(entry["t"], ".4g"),
                format_number(entry["height"], ".4f"),
                format_number(entry["exact_height"], ".4f"),
            ],
        }
        for entry in heights
    ]
    return _render(
        title="Gaussian pulse",
        status="ok",
        settings=list(settings.items()),
        table_title="Pulse height",
        columns=["t", "height", "exact"],
        rows=rows,
        notes=[],
    )


# ============================================================================
# File Operations
# ============================================================================

def save_report(html_content: str, path: Path) -> Path:
    """Write an HTML report and return its path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(html_content)
    console.print(f"[dim]Report written to {path}[/dim]")
    return path
