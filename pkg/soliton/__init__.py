"""
Soliton package: defining equations, reduced invariant systems, diagnostics
and grid verification.
"""

from .diagnostics import drift_laplacian, mu_constant, xi_operator
from .equations import (
    fiber_constant,
    grhs_residual,
    reconstruct_residual,
    reduced_residuals_base,
    reduced_residuals_fiber,
)
from .report import GridSpec, ResidualReport, verify

__all__ = [
    "drift_laplacian",
    "mu_constant",
    "xi_operator",
    "fiber_constant",
    "grhs_residual",
    "reconstruct_residual",
    "reduced_residuals_base",
    "reduced_residuals_fiber",
    "GridSpec",
    "ResidualReport",
    "verify",
]
