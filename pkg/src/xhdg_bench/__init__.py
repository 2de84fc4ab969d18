"""xhdg-bench: unfitted hybridizable DG solver for convection-diffusion."""

__version__ = "0.1.0"
__app_name__ = "xhdg"
