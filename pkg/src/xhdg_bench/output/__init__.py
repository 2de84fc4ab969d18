"""Output module for rendering reports."""

from .renderer import render_convergence_html, render_pulse_html, save_report

__all__ = ["render_convergence_html", "render_pulse_html", "save_report"]
