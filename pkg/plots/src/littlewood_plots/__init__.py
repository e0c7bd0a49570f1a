"""Figures from littlewood sweep CSVs (schema v1)."""

from .figures import (
    FIGURE_KINDS,
    FigureError,
    FigureSpec,
    load_rows,
    plot_convergence,
    plot_histogram,
    plot_rotation_profile,
    profile_curve,
    profile_value,
    render,
)

__version__ = "0.1.0"
