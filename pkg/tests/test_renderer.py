"""HTML reports."""

from xhdg_bench.core.postprocess import ConvergenceReport, ConvergenceRow, convergence_orders
from xhdg_bench.output.renderer import (
    format_number,
    render_convergence_html,
    render_pulse_html,
    save_report,
)


def test_format_number():
    assert format_number(None) == "-"
    assert format_number(float("nan")) == "-"
    assert format_number(1.5e-3) == "1.500e-03"
    assert format_number(1.874, ".2f") == "1.87"


def test_convergence_report():
    rows = convergence_orders([
        ConvergenceRow(1, 4, 8.14e-2, 1.33e-2),
        ConvergenceRow(1, 8, 2.23e-2, 1.77e-3),
        ConvergenceRow(2, 4, status="failed", message="trace matrix is singular"),
    ])
    html = render_convergence_html(ConvergenceReport("circle-diffusion", "centered", "dirichlet", rows), {"ν": 1.0})
    assert html.startswith("<!DOCTYPE html>")
    assert "8.140e-02" in html
    assert "1.87" in html
    assert "trace matrix is singular" in html
    assert 'class="badge failed"' in html


def test_pulse_report_escapes_settings(tmp_path):
    heights = [{"t": 0.0, "height": 1.0, "exact_height": 1.0}]
    html = render_pulse_html(heights, {"note": "<script>"})
    assert "&lt;script&gt;" in html
    path = save_report(html, tmp_path / "out" / "pulse.html")
    assert path.read_text(encoding="utf-8") == html
