"""
Integration of the ψ-z system behind the variable-z base of Cases 3 and 4.

With R = √(m + k²(n-1)) and a = k/R the base reduces to

    ψ' = z ψ²,    z' = -ψ (z + k - R)(z + k + R),

whose first integral expresses ψ and z' as products of real powers of the two
factors. The state (z, log f, h, ψ) is integrated with an embedded
Runge-Kutta pair; profile jets are rebuilt from the right-hand side so their
derivatives do not come from differentiating the interpolant.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from core.errors import ConstructionError, IntegrationError
from core.profiles import Jet, Profile, jet_profile
from .params import CaseParams

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
CONSISTENCY_SAMPLES = 201
PSI_CAP = 1e8


def exponent_pairs(params: CaseParams) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Exponents of (z+k-R, z+k+R) in ψ and in z'."""
    a = params.sign_exponent
    if params.exponents == "printed":
        return ((a - 1) / 2, (-a + 1) / 2), ((a + 1) / 2, (-a - 1) / 2)
    return ((a - 1) / 2, (-a - 1) / 2), ((a + 1) / 2, (-a + 1) / 2)


@dataclass
class PsiZSolution:
    """Dense solution of the ψ-z system over a span of ξ."""
    params: CaseParams
    xi_span: Tuple[float, float]
    dense: object
    psi_deviation: float = 0.0
    stopped_at: Optional[float] = None

    def _factors(self, z: float, xi: Optional[float] = None) -> Tuple[float, float]:
        p = self.params
        lower, upper = z + p.k - p.radius, z + p.k + p.radius
        if lower <= 0.0 or upper <= 0.0:
            where = f" at xi={xi!r}" if xi is not None else ""
            raise ConstructionError(
                f"complex power: z={z!r} gives factors ({lower!r}, {upper!r}){where}"
            )
        return lower, upper

    def psi(self, z: float, xi: Optional[float] = None) -> Tuple[float, float]:
        """ψ(z) and dψ/dz."""
        (e1, e2), _ = exponent_pairs(self.params)
        lower, upper = self._factors(z, xi)
        value = self.params.c6 * lower ** e1 * upper ** e2
        return value, value * (e1 / lower + e2 / upper)

    def z_rate(self, z: float, xi: Optional[float] = None) -> float:
        _, (g1, g2) = exponent_pairs(self.params)
        lower, upper = self._factors(z, xi)
        return -self.params.c6 * lower ** g1 * upper ** g2

    def state(self, xi: float) -> np.ndarray:
        return self.dense(xi)

    def jets(self, xi: float) -> Dict[str, Jet]:
        """Exact jets of φ, f, h at ξ from the integrated state."""
        p = self.params
        z, log_f, h, _ = self.state(xi)
        psi, dpsi = self.psi(z, xi)
        z1 = self.z_rate(z, xi)
        psi1 = dpsi * z1
        f = p.c5 * math.exp(log_f)
        phi = p.c4 * math.exp(p.k * log_f)
        q = z + p.m - p.k * (p.n - 2)
        return {
            "f": Jet(f, f * psi, f * (psi1 + psi * psi)),
            "phi": Jet(phi, p.k * psi * phi, phi * (p.k * psi1 + p.k * p.k * psi * psi)),
            "h": Jet(p.h2 + h, q * psi, z1 * psi + q * psi1),
        }

    def profile(self, name: str) -> Profile:
        data = {"system": "psi-z", "profile": name, "params": self.params.to_json()}
        return jet_profile(
            lambda t: tuple(self.jets(t)[name]),
            domain=self.xi_span,
            variable="xi",
            label=f"psi-z:{name}",
            data=data,
        )


def integrate_psi_z(
    params: CaseParams,
    xi_span: Optional[Tuple[float, float]] = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> PsiZSolution:
    """
    Integrate the ψ-z system from z(ξ0) = z0.

    Args:
        params: case parameters (k, n, m, c4, c5, c6, z0, exponents)
        xi_span: integration interval, defaults to params.xi_span
        rtol: relative tolerance
        atol: absolute tolerance

    Returns:
        PsiZSolution with the redundant ψ' = zψ² path compared against ψ(z).
        With printed exponents the redundant path can blow up inside the span;
        integration then stops there, stopped_at records where, and the
        deviation covers the reached span only.
    """
    xi_span = tuple(xi_span or params.xi_span)
    solution = PsiZSolution(params, xi_span, dense=None)
    q_shift = params.m - params.k * (params.n - 2)

    def rhs(xi, y):
        z, _, _, psi_direct = y
        psi, _ = solution.psi(z, xi)
        return [solution.z_rate(z, xi), psi, (z + q_shift) * psi, z * psi_direct * psi_direct]

    psi0, _ = solution.psi(params.z0, xi_span[0])
    logger.info(
        f"Integrating psi-z system on {xi_span} (R={params.radius:.6g}, a={params.sign_exponent:.6g}, "
        f"exponents={params.exponents})"
    )
    printed = params.exponents == "printed"

    def blow_up(xi, y):
        return PSI_CAP - abs(y[3])
    blow_up.terminal = True

    result = solve_ivp(
        rhs,
        xi_span,
        [params.z0, 0.0, 0.0, psi0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=blow_up if printed else None,
    )
    reached = float(result.t[-1])
    if not result.success and not printed:
        raise IntegrationError(f"psi-z integration stopped at xi={reached!r}: {result.message}")
    if result.status != 0:
        if reached == xi_span[0] or result.sol is None:
            raise IntegrationError(f"psi-z integration made no progress from xi={reached!r}: {result.message}")
        logger.warning(f"psi-z integration with printed exponents stopped at xi={reached!r}: {result.message}")
        solution.stopped_at = reached
        solution.xi_span = xi_span = (xi_span[0], reached)
    solution.dense = result.sol

    grid = np.linspace(xi_span[0], xi_span[1], CONSISTENCY_SAMPLES)
    states = result.sol(grid)
    closed = np.array([solution.psi(z, xi)[0] for z, xi in zip(states[0], grid)])
    solution.psi_deviation = float(np.max(np.abs(closed - states[3])))
    logger.info(f"psi-z consistency: max |psi(z) - psi_direct| = {solution.psi_deviation:.3e}")
    return solution
