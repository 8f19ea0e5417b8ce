"""
Curvature package.

Closed-form operators for conformal invariant metrics and warped products,
and the finite-difference oracle they are checked against.
"""

from .conformal import (
    conformal_hessian,
    conformal_laplacian,
    conformal_metric,
    conformal_pairing,
    conformal_ricci,
    gradient_norm_sq,
    gradient_outer,
)
from .oracle import OracleReport, fd_ricci, oracle_check
from .warped import BlockMatrix, MetricField, fiber_metric, metric_field, product_metric, warped_ricci

__all__ = [
    "conformal_hessian",
    "conformal_laplacian",
    "conformal_metric",
    "conformal_pairing",
    "conformal_ricci",
    "gradient_norm_sq",
    "gradient_outer",
    "OracleReport",
    "fd_ricci",
    "oracle_check",
    "BlockMatrix",
    "MetricField",
    "fiber_metric",
    "metric_field",
    "product_metric",
    "warped_ricci",
]
