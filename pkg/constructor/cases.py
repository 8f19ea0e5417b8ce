"""
Constructions of steady solitons with u on the fiber, one per classified case.

    Case 1  ||α||² = 0, ||β||² = 0   free φ, f, τ; h and u by quadrature
    Case 2  ||α||² = 0, ||β||² = 1   Case-1 base, τ and u in closed form
    Case 3  ||α||² = 1, ||β||² = 0   power-law (constant z) or ψ-z base
    Case 4  ||α||² = 1, ||β||² = 1   Case-3 base with the Case-2 fiber
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from core.errors import ConstructionError
from core.factors import Placement, WarpedCandidate
from core.profiles import Exp, Profile, affine_coefficients, antiderivative, exp, log, sqrt
from .params import CaseParams, ZMode
from .psi_z import DEFAULT_ATOL, DEFAULT_RTOL, integrate_psi_z

logger = logging.getLogger(__name__)

RADICAND_SAMPLES = 101
RADICAND_SLACK = 1e-14


def _midpoint(span: Tuple[float, float], profile: Profile) -> float:
    lo = max(span[0], profile.domain[0])
    hi = min(span[1], profile.domain[1])
    return 0.5 * (lo + hi)


def exponential_base(params: CaseParams) -> Tuple[Profile, Profile]:
    """φ and f of Cases 1 and 2: supplied, or k·exp(A ξ)."""
    xi = Profile.identity("xi")
    default = params.k * exp(params.A * xi)
    phi = params.phi.with_variable("xi") if params.phi is not None else default
    f = params.f.with_variable("xi") if params.f is not None else default
    return phi, f


def potential_by_quadrature(phi: Profile, f: Profile, params: CaseParams) -> Profile:
    """
    Potential of a null base direction as two stacked antiderivatives.

    φ² h' = ∫ (m f''/f φ² + 2m φ φ' f'/f - (n-2) φ φ'') + h1,  h = ∫ h' + h2,
    both referenced at the middle of the working ξ interval.
    """
    n, m = params.n, params.m
    d_phi, d_f = phi.derivative(), f.derivative()
    dd_phi, dd_f = d_phi.derivative(), d_f.derivative()
    integrand = m * (dd_f / f) * phi ** 2 + 2 * m * phi * d_phi * (d_f / f) - (n - 2) * phi * dd_phi
    ref = _midpoint(params.xi_span, integrand)
    inner = antiderivative(integrand, ref=ref, ref_value=params.h1, tol=params.quad_tol / 10.0)
    return antiderivative(inner / phi ** 2, ref=ref, ref_value=params.h2, tol=params.quad_tol)


def harmonic_fiber_map(tau: Profile, params: CaseParams) -> Profile:
    """
    u with u' = ±√((m-2)/θ · τ''/τ) and u(ζ_ref) = c3.

    Constant τ gives constant u and τ = exp(a ζ + b) gives a linear u; any other
    τ is integrated by quadrature after checking the radicand on the ζ interval.
    """
    scale = (params.m - 2) / params.theta
    if tau.is_constant:
        return Profile.constant(params.c3, "zeta")
    if isinstance(tau.expr, Exp):
        coeffs = affine_coefficients(tau.expr.arg)
        if coeffs is not None:
            zeta = Profile.identity("zeta")
            return params.c3 + params.sign_value * math.sqrt(scale) * abs(coeffs[0]) * zeta

    radicand = scale * tau.derivative().derivative() / tau
    lo = max(params.zeta_span[0], tau.domain[0])
    hi = min(params.zeta_span[1], tau.domain[1])
    for z in np.linspace(lo, hi, RADICAND_SAMPLES)[1:-1]:
        value = radicand(float(z))
        if value < -RADICAND_SLACK:
            raise ConstructionError(f"negative radicand {value:.6g} for u' at zeta={z:.6g}")
    if radicand.is_constant:
        return params.c3 + params.sign_value * math.sqrt(radicand(0.0)) * Profile.identity("zeta")
    integrand = params.sign_value * sqrt(radicand)
    return antiderivative(integrand, ref=0.5 * (lo + hi), ref_value=params.c3, tol=params.quad_tol)


def case2_fiber(params: CaseParams) -> Tuple[Profile, Profile]:
    """τ = c2 (c1 + (m-2)ζ)^(1/(2-m)) and its harmonic map on ζ > -c1/(m-2)."""
    m = params.m
    zeta = Profile.identity("zeta")
    w = (params.c1 + (m - 2) * zeta).on(-params.c1 / (m - 2), math.inf)
    tau = params.c2 * w ** (1.0 / (2 - m))
    rate = params.sign_value * math.sqrt((m - 1) * (m - 2) / params.theta) / (m - 2)
    return tau, params.c3 + rate * log(w)


def case3_fiber(params: CaseParams) -> Tuple[Profile, Profile]:
    """Null fiber direction: τ supplied or exp(c4 ζ), u from the quadrature formula."""
    if params.tau is not None:
        tau = params.tau.with_variable("zeta")
    else:
        tau = exp(params.c4 * Profile.identity("zeta"))
    return tau, harmonic_fiber_map(tau, params)


def power_law_slope(params: CaseParams) -> float:
    """N± = -k ± √(m + k²(n-1))."""
    slope = -params.k + (1.0 if params.branch == "+" else -1.0) * params.radius
    if abs(slope) < 1e-12:
        raise ConstructionError(f"degenerate exponent: N{params.branch} = {slope!r}")
    return slope


def power_law_base(params: CaseParams) -> Tuple[Profile, Profile, Profile]:
    """φ = c4 w^(-k/N), f = c5 w^(-1/N), h = -((m-(n-2)k+N)/N) log w with w = Nξ+b > 0."""
    slope = power_law_slope(params)
    root = -params.b / slope
    xi = Profile.identity("xi")
    w = slope * xi + params.b
    w = w.on(root, math.inf) if slope > 0 else w.on(-math.inf, root)
    phi = params.c4 * w ** (-params.k / slope)
    f = params.c5 * w ** (-1.0 / slope)
    h = -((params.m - (params.n - 2) * params.k + slope) / slope) * log(w)
    return phi, f, h


def variable_z_base(
    params: CaseParams,
    xi_span: Optional[Tuple[float, float]] = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> Tuple[Profile, Profile, Profile]:
    solution = integrate_psi_z(params, xi_span, rtol, atol)
    return solution.profile("phi"), solution.profile("f"), solution.profile("h")


def _candidate(params: CaseParams, phi, f, h, tau, u, label: str) -> WarpedCandidate:
    return WarpedCandidate(
        base=params.base_factor(),
        alpha=params.alpha(),
        phi=phi,
        fiber=params.fiber_factor(),
        beta=params.beta(),
        tau=tau,
        f=f,
        h=h,
        u=u,
        u_placement=Placement.FIBER,
        theta=params.theta,
        lam=0.0,
        mu=0.0,
        label=label,
    )


def construct_case1(params: CaseParams) -> WarpedCandidate:
    """Null base and fiber directions; τ defaults to ζ² + 1."""
    _expect(params, 1)
    phi, f = exponential_base(params)
    if params.tau is not None:
        tau = params.tau.with_variable("zeta")
    else:
        zeta = Profile.identity("zeta")
        tau = zeta ** 2 + 1.0
    u = harmonic_fiber_map(tau, params)
    h = potential_by_quadrature(phi, f, params)
    logger.info(f"Constructed case 1 (n={params.n}, m={params.m}, theta={params.theta})")
    return _candidate(params, phi, f, h, tau, u, "case1")


def construct_case2(params: CaseParams) -> WarpedCandidate:
    _expect(params, 2)
    phi, f = exponential_base(params)
    tau, u = case2_fiber(params)
    h = potential_by_quadrature(phi, f, params)
    logger.info(f"Constructed case 2 on zeta > {-params.c1 / (params.m - 2):.6g}")
    return _candidate(params, phi, f, h, tau, u, "case2")


def construct_case3_constant_z(params: CaseParams) -> WarpedCandidate:
    """Power-law base for a constant z = N±."""
    _expect(params, 3)
    phi, f, h = power_law_base(params)
    tau, u = case3_fiber(params)
    logger.info(f"Constructed case 3 with z = N{params.branch} = {power_law_slope(params):.6g}")
    return _candidate(params, phi, f, h, tau, u, "case3-constant-z")


def construct_case3_variable_z(
    params: CaseParams,
    xi_span: Optional[Tuple[float, float]] = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> WarpedCandidate:
    """
    Base from the integrated ψ-z system.

    Args:
        params: case parameters
        xi_span: integration interval, defaults to params.xi_span
        rtol: relative tolerance of the stepper
        atol: absolute tolerance of the stepper
    """
    _expect(params, 3)
    phi, f, h = variable_z_base(params, xi_span, rtol, atol)
    tau, u = case3_fiber(params)
    return _candidate(params, phi, f, h, tau, u, "case3-variable-z")


def construct_case3(params: CaseParams) -> WarpedCandidate:
    if params.z_mode is ZMode.VARIABLE:
        return construct_case3_variable_z(params)
    return construct_case3_constant_z(params)


def construct_case4(params: CaseParams) -> WarpedCandidate:
    """Case-3 base (either z mode) with the Case-2 fiber."""
    _expect(params, 4)
    if params.z_mode is ZMode.VARIABLE:
        phi, f, h = variable_z_base(params)
    else:
        phi, f, h = power_law_base(params)
    tau, u = case2_fiber(params)
    logger.info(f"Constructed case 4 with {params.z_mode.value} z")
    return _candidate(params, phi, f, h, tau, u, f"case4-{params.z_mode.value}-z")


CONSTRUCTORS = {
    1: construct_case1,
    2: construct_case2,
    3: construct_case3,
    4: construct_case4,
}


def construct(params: CaseParams) -> WarpedCandidate:
    return CONSTRUCTORS[params.case_id](params)


def _expect(params: CaseParams, case_id: int):
    if params.case_id != case_id:
        raise ConstructionError(f"parameters are for case {params.case_id}, not case {case_id}")
