"""
Defining equations of a gradient Ricci-harmonic soliton and their reductions.

grhs_residual assembles Ric + Hess h - θ∇u⊗∇u - λg blockwise from the
curvature operators. The reduced residuals work directly on profile jets,
so reconstruct_residual gives a second, independent path to the same blocks.
"""

import logging
from typing import Tuple

import numpy as np

from core.errors import PlacementError
from core.factors import Placement, WarpedCandidate, positive_jet
from core.profiles import Profile
from curvature.conformal import (
    conformal_hessian,
    conformal_laplacian,
    conformal_metric,
    conformal_pairing,
    gradient_outer,
)
from curvature.warped import BlockMatrix, fiber_metric, warped_ricci

logger = logging.getLogger(__name__)

_FLAT = Profile.constant(1.0, variable="zeta")


def potential_hessian(candidate: WarpedCandidate, xi: float, zeta: float) -> BlockMatrix:
    """Hess h for h on the base: fiber block f g_F g_B(∇f, ∇h)."""
    c = candidate
    f = positive_jet(c.f, xi, "f").value
    pairing = conformal_pairing(c.f, c.h, c.phi, c.alpha, c.base, xi)
    return BlockMatrix(
        conformal_hessian(c.h, c.phi, c.alpha, c.base, xi),
        np.zeros((c.n, c.m)),
        f * pairing * np.diag(fiber_metric(c, zeta)),
    )


def harmonic_outer(candidate: WarpedCandidate, xi: float, zeta: float) -> BlockMatrix:
    """∇u ⊗ ∇u on the factor carrying u."""
    c = candidate
    out = BlockMatrix.zeros(c.n, c.m)
    if c.u_placement is Placement.BASE:
        return BlockMatrix(gradient_outer(c.u, c.alpha, xi), out.mixed_block, out.fiber_block)
    return BlockMatrix(out.base_block, out.mixed_block, gradient_outer(c.u, c.beta, zeta))


def tension_residual(candidate: WarpedCandidate, xi: float, zeta: float) -> float:
    """τ_g u - g(∇u, ∇h) for u lifted from one factor."""
    c = candidate
    if c.u_placement is Placement.BASE:
        f = positive_jet(c.f, xi, "f").value
        return (
            conformal_laplacian(c.u, c.phi, c.alpha, c.base, xi)
            + (c.m / f) * conformal_pairing(c.u, c.f, c.phi, c.alpha, c.base, xi)
            - conformal_pairing(c.u, c.h, c.phi, c.alpha, c.base, xi)
        )
    f = positive_jet(c.f, xi, "f").value
    tau = c.tau if c.tau is not None else _FLAT
    return conformal_laplacian(c.u, tau, c.beta, c.fiber, zeta) / (f * f)


def grhs_residual(candidate: WarpedCandidate, point: Tuple[float, float]) -> Tuple[BlockMatrix, float]:
    """
    Residual of the soliton system at invariant coordinates (ξ, ζ).

    Args:
        candidate: warped-product candidate
        point: (ξ, ζ)

    Returns:
        (Ric + Hess h - θ∇u⊗∇u - λg as a BlockMatrix, tension residual)
    """
    xi, zeta = point
    c = candidate
    f = positive_jet(c.f, xi, "f").value
    metric = BlockMatrix(
        np.diag(conformal_metric(c.phi, c.base, xi)),
        np.zeros((c.n, c.m)),
        f * f * np.diag(fiber_metric(c, zeta)),
    )
    tensor = (
        warped_ricci(c, point)
        + potential_hessian(c, xi, zeta)
        - harmonic_outer(c, xi, zeta).scaled(c.theta)
        - metric.scaled(c.lam)
    )
    return tensor, tension_residual(c, xi, zeta)


def _base_ratios(candidate: WarpedCandidate, xi: float):
    c = candidate
    phi = positive_jet(c.phi, xi, "phi")
    f = positive_jet(c.f, xi, "f")
    return phi, f, c.h.eval(xi)


def reduced_residuals_base(candidate: WarpedCandidate, xi: float) -> Tuple[float, float, float, float]:
    """
    Residuals of the invariant system for u on the base and a generic Einstein fiber.

    Returns:
        (E1, E2, E3, E4)
    """
    c = candidate
    if c.u_placement is not Placement.BASE:
        raise PlacementError("reduced base system needs u on the base")
    if c.tau is not None:
        raise PlacementError("reduced base system needs a generic Einstein fiber (no tau)")
    n, m, N = c.n, c.m, c.alpha.pseudo_norm_sq
    phi, f, h = _base_ratios(c, xi)
    u = c.u.eval(xi)
    p1, p2 = phi.d1 / phi.value, phi.d2 / phi.value
    q1, q2 = f.d1 / f.value, f.d2 / f.value
    phi_sq = phi.value * phi.value

    e1 = (n - 2) * p2 - m * q2 - 2 * m * p1 * q1 + h.d2 + 2 * p1 * h.d1 - c.theta * u.d1 * u.d1
    e2 = (p2 - (n - 1) * p1 * p1 + m * p1 * q1 - p1 * h.d1) * N - c.lam / phi_sq
    e3 = (
        (q2 - (n - 2) * p1 * q1 + (m - 1) * q1 * q1 - q1 * h.d1) * N
        - c.mu / (f.value * f.value * phi_sq)
        + c.lam / phi_sq
    )
    e4 = (u.d2 - (n - 2) * p1 * u.d1 + m * u.d1 * q1 - u.d1 * h.d1) * N
    return e1, e2, e3, e4


def fiber_constant(candidate: WarpedCandidate, xi: float) -> float:
    """Left side of the third fiber equation, the fiber Einstein-harmonic constant."""
    c = candidate
    phi, f, h = _base_ratios(c, xi)
    phi_sq = phi.value * phi.value
    bracket = (
        f.d2 * phi_sq * f.value
        - (c.n - 2) * phi.d1 * phi.value * f.value * f.d1
        + (c.m - 1) * f.d1 * f.d1 * phi_sq
        - f.d1 * f.value * phi_sq * h.d1
    )
    return bracket * c.alpha.pseudo_norm_sq + c.lam * f.value * f.value


def reduced_residuals_fiber(
    candidate: WarpedCandidate, xi: float, zeta: float
) -> Tuple[float, float, float, float, float]:
    """
    Residuals of the invariant system for u on a conformal fiber.

    Returns:
        (E1, E2, E3, E4, E5)
    """
    c = candidate
    if c.u_placement is not Placement.FIBER:
        raise PlacementError("reduced fiber system needs u on the fiber")
    if c.tau is None:
        raise PlacementError("reduced fiber system needs a fiber conformal factor tau")
    n, m, N = c.n, c.m, c.alpha.pseudo_norm_sq
    phi, f, h = _base_ratios(c, xi)
    tau = positive_jet(c.tau, zeta, "tau")
    u = c.u.eval(zeta)
    p1, p2 = phi.d1 / phi.value, phi.d2 / phi.value
    q1, q2 = f.d1 / f.value, f.d2 / f.value
    t2 = tau.d2 / tau.value
    Nb = c.beta.pseudo_norm_sq

    e1 = (n - 2) * p2 - m * q2 - 2 * m * p1 * q1 + h.d2 + 2 * p1 * h.d1
    e2 = (p2 - (n - 1) * p1 * p1 + m * p1 * q1 - p1 * h.d1) * N - c.lam / (phi.value * phi.value)
    e3 = fiber_constant(c, xi) - (tau.value * tau.d2 - (m - 1) * tau.d1 * tau.d1) * Nb
    e4 = (m - 2) * t2 - c.theta * u.d1 * u.d1
    e5 = (tau.value * tau.value * u.d2 - (m - 2) * tau.value * tau.d1 * u.d1) * Nb
    return e1, e2, e3, e4, e5


def reconstruct_residual(candidate: WarpedCandidate, point: Tuple[float, float]) -> Tuple[BlockMatrix, float]:
    """Rebuild the grhs_residual blocks from the reduced residuals."""
    xi, zeta = point
    c = candidate
    aa = np.outer(c.alpha.vector, c.alpha.vector)
    eps = np.diag(c.base.eps)
    eps_fiber = np.diag(c.fiber.eps)
    mixed = np.zeros((c.n, c.m))

    if c.u_placement is Placement.BASE:
        e1, e2, e3, e4 = reduced_residuals_base(c, xi)
        phi = c.phi.eval(xi).value
        f = c.f.eval(xi).value
        fiber = -e3 * f * f * phi * phi * eps_fiber
        return BlockMatrix(e1 * aa + e2 * eps, mixed, fiber), phi * phi * e4

    e1, e2, e3, e4, e5 = reduced_residuals_fiber(c, xi, zeta)
    tau = c.tau.eval(zeta).value
    f = c.f.eval(xi).value
    bb = np.outer(c.beta.vector, c.beta.vector)
    fiber = e4 * bb - (e3 / (tau * tau)) * eps_fiber
    return BlockMatrix(e1 * aa + e2 * eps, mixed, fiber), e5 / (f * f)
