"""
Closed-form curvature operators of a conformal invariant metric φ(ξ)^-2 g_0.

Every operator takes the conformal factor, an invariant direction and the
factor it lives on, and evaluates at a single value of the invariant
coordinate. The same functions serve the fiber with (τ, β, ζ).
"""

import logging

import numpy as np

from core.errors import ShapeError
from core.factors import InvariantDirection, SemiEuclideanFactor, positive_jet
from core.profiles import Profile

logger = logging.getLogger(__name__)


def _check(alpha: InvariantDirection, factor: SemiEuclideanFactor):
    if len(alpha.coefficients) != factor.dim:
        raise ShapeError(
            f"Direction has {len(alpha.coefficients)} entries, factor has dim {factor.dim}"
        )


def _log_derivatives(phi: Profile, t: float):
    """φ(t), φ'/φ and φ''/φ."""
    p = positive_jet(phi, t, "conformal factor")
    return p.value, p.d1 / p.value, p.d2 / p.value


def conformal_ricci(
    phi: Profile, alpha: InvariantDirection, factor: SemiEuclideanFactor, xi: float
) -> np.ndarray:
    """
    Ricci tensor of φ^-2 g_0 in the flat coordinates.

    Args:
        phi: conformal factor, a function of ξ
        alpha: invariant direction
        factor: semi-Euclidean factor carrying the signature
        xi: invariant coordinate

    Returns:
        (n, n) symmetric matrix
    """
    _check(alpha, factor)
    n = factor.dim
    _, r1, r2 = _log_derivatives(phi, xi)
    a = alpha.vector
    return (n - 2) * r2 * np.outer(a, a) + (
        (r2 - (n - 1) * r1 * r1) * alpha.pseudo_norm_sq
    ) * np.diag(factor.eps)


def conformal_hessian(
    scal: Profile,
    phi: Profile,
    alpha: InvariantDirection,
    factor: SemiEuclideanFactor,
    xi: float,
) -> np.ndarray:
    """Hessian of an invariant function under φ^-2 g_0."""
    _check(alpha, factor)
    _, r1, _ = _log_derivatives(phi, xi)
    s = scal.eval(xi)
    aa = np.outer(alpha.vector, alpha.vector)
    mixed = 2.0 * aa - alpha.pseudo_norm_sq * np.diag(factor.eps)
    return s.d2 * aa + (r1 * s.d1) * mixed


def conformal_laplacian(
    scal: Profile,
    phi: Profile,
    alpha: InvariantDirection,
    factor: SemiEuclideanFactor,
    xi: float,
) -> float:
    _check(alpha, factor)
    value, r1, _ = _log_derivatives(phi, xi)
    s = scal.eval(xi)
    return alpha.pseudo_norm_sq * value * value * (s.d2 - (factor.dim - 2) * r1 * s.d1)


def conformal_pairing(
    a: Profile,
    b: Profile,
    phi: Profile,
    alpha: InvariantDirection,
    factor: SemiEuclideanFactor,
    xi: float,
) -> float:
    """g(∇a, ∇b) for invariant functions a and b."""
    _check(alpha, factor)
    value, _, _ = _log_derivatives(phi, xi)
    return alpha.pseudo_norm_sq * value * value * a.eval(xi).d1 * b.eval(xi).d1


def gradient_norm_sq(
    scal: Profile,
    phi: Profile,
    alpha: InvariantDirection,
    factor: SemiEuclideanFactor,
    xi: float,
) -> float:
    """|∇scal|²."""
    return conformal_pairing(scal, scal, phi, alpha, factor, xi)


def gradient_outer(scal: Profile, alpha: InvariantDirection, xi: float) -> np.ndarray:
    """∇scal ⊗ ∇scal as a covariant tensor: α_i α_j (scal')²."""
    d1 = scal.eval(xi).d1
    return (d1 * d1) * np.outer(alpha.vector, alpha.vector)


def conformal_metric(phi: Profile, factor: SemiEuclideanFactor, xi: float) -> np.ndarray:
    """Diagonal of φ^-2 g_0."""
    value, _, _ = _log_derivatives(phi, xi)
    return factor.eps / (value * value)
