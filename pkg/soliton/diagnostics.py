"""
Scalar diagnostics: the fiber Einstein constant, the drift Laplacian of u and
the second-order operator Ξ applied to the warping function.
"""

import logging

from core.errors import PlacementError
from core.factors import Placement, WarpedCandidate, positive_jet
from core.profiles import log
from curvature.conformal import conformal_laplacian, conformal_pairing, gradient_norm_sq

logger = logging.getLogger(__name__)


def mu_constant(candidate: WarpedCandidate, xi: float) -> float:
    """
    f Δf + (m-1)|∇f|² + λf² - f g(∇f, ∇h) on the base.

    For a soliton this is the constant μ with Ric_F = μ g_F (or the
    Einstein-harmonic constant of the fiber); it must not depend on ξ.
    """
    c = candidate
    f = positive_jet(c.f, xi, "f").value
    return (
        f * conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi)
        + (c.m - 1) * gradient_norm_sq(c.f, c.phi, c.alpha, c.base, xi)
        + c.lam * f * f
        - f * conformal_pairing(c.f, c.h, c.phi, c.alpha, c.base, xi)
    )


def drift_laplacian(candidate: WarpedCandidate, xi: float) -> float:
    """Δu - g(∇u, ∇ω) with ω = h - m log f."""
    c = candidate
    if c.u_placement is not Placement.BASE:
        raise PlacementError("drift Laplacian is defined for u on the base")
    omega = c.h - c.m * log(c.f)
    return conformal_laplacian(c.u, c.phi, c.alpha, c.base, xi) - conformal_pairing(
        c.u, omega, c.phi, c.alpha, c.base, xi
    )


def xi_operator(candidate: WarpedCandidate, xi: float) -> float:
    """Ξ(f) - (μ - λf²)/f with Ξ = Δ - g(∇h, ∇·) + ((m-1)/f) g(∇f, ∇·)."""
    c = candidate
    f = positive_jet(c.f, xi, "f").value
    applied = (
        conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi)
        - conformal_pairing(c.h, c.f, c.phi, c.alpha, c.base, xi)
        + (c.m - 1) * gradient_norm_sq(c.f, c.phi, c.alpha, c.base, xi) / f
    )
    return applied - (c.mu - c.lam * f * f) / f
