"""Reference convergence rates and pulse heights on the benchmark meshes."""

import pytest

from xhdg_bench.core.config import apply_overrides, default_config
from xhdg_bench.core.runner import run_converge, run_pulse

pytestmark = pytest.mark.slow

# finest-pair orders of u for the peanut case, p = 1..4
PEANUT_ORDERS = {1: 1.79, 2: 2.77, 3: 3.69, 4: 4.62}


def _sweep(case, tmp_path, **overrides):
    config = apply_overrides(default_config(case), output_dir=str(tmp_path), **overrides)
    rows = run_converge(config, quiet=True).report.rows
    assert all(row.ok for row in rows), [row.message for row in rows if not row.ok]
    return rows


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("flux,interface_bc", [
    ("centered", "dirichlet"),
    ("upwind", "dirichlet"),
    ("centered", "neumann"),
    ("upwind", "neumann"),
])
def test_circle_diffusion_rates(p, flux, interface_bc, tmp_path):
    rows = _sweep(
        "circle-diffusion",
        tmp_path,
        degrees=[p],
        meshes=[8, 16, 32],
        flux=flux,
        interface_bc=interface_bc,
    )
    finest = rows[-1]
    assert abs(finest.order_u - (p + 1)) <= 0.2
    assert abs(finest.order_ustar - (p + 2)) <= 0.3


def test_circle_diffusion_error_magnitude(tmp_path):
    rows = _sweep("circle-diffusion", tmp_path, degrees=[2], meshes=[16])
    # within a factor 3 of the published 1.93e-4
    assert 1.93e-4 / 3.0 < rows[0].err_u < 1.93e-4 * 3.0


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("flux", ["centered", "upwind"])
def test_circle_convection_rates(p, flux, tmp_path):
    rows = _sweep("circle-convection", tmp_path, degrees=[p], meshes=[16, 32, 64], flux=flux)
    finest = rows[-1]
    assert abs(finest.order_u - (p + 1)) <= 0.2
    assert finest.order_ustar >= p + 1.5


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_peanut_neumann_rates(p, tmp_path):
    rows = _sweep("peanut", tmp_path, degrees=[p], meshes=[32, 64])
    assert rows[-1].order_u >= 0.85 * PEANUT_ORDERS[p]


@pytest.mark.parametrize("flux", ["centered", "upwind"])
def test_pulse_height_window(flux, tmp_path):
    config = apply_overrides(default_config("pulse"), flux=flux, output_dir=str(tmp_path))
    heights = run_pulse(config, quiet=True).heights

    assert heights[0]["height"] == pytest.approx(1.0, abs=0.02)
    final = heights[-1]
    assert final["t"] == pytest.approx(1.25)
    assert 0.150 <= final["height"] <= 0.172
    assert final["exact_height"] == pytest.approx(1.0 / 6.0, abs=2e-3)
