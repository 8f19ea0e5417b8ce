"""
Geodesic equations of the warped product metric.

Three right-hand sides are provided:

    levi-civita   -Γ^k_ij v^i v^j of the diagonal metric (φ^-2 ε ; f² τ^-2 ε')
    split         the warped-product split, each factor with its own conformal connection
    flat-factor   the split with both factor connections dropped
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from core.errors import ShapeError
from core.factors import WarpedCandidate, positive_jet
from core.profiles import Jet

logger = logging.getLogger(__name__)

_UNIT = Jet(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class GeodesicState:
    s: float
    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        position = np.asarray(self.position, dtype=float)
        velocity = np.asarray(self.velocity, dtype=float)
        if position.shape != velocity.shape or position.ndim != 1:
            raise ShapeError("position and velocity must be vectors of equal length")
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "velocity", velocity)

    @property
    def dim(self) -> int:
        return self.position.shape[0]

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity])

    @classmethod
    def from_array(cls, s: float, y: np.ndarray) -> "GeodesicState":
        d = y.shape[0] // 2
        return cls(float(s), y[:d].copy(), y[d:].copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.position)) and np.all(np.isfinite(self.velocity)))


@dataclass(frozen=True)
class _Frame:
    """Profile jets and direction data at one point."""
    phi: Jet
    f: Jet
    tau: Jet
    alpha: np.ndarray
    beta: np.ndarray
    eps: np.ndarray
    eps_fiber: np.ndarray


def _frame(candidate: WarpedCandidate, position: np.ndarray) -> _Frame:
    xi, zeta = candidate.invariant_coordinates(position)
    tau = positive_jet(candidate.tau, zeta, "tau") if candidate.tau is not None else _UNIT
    beta = candidate.beta.vector if candidate.beta is not None else np.zeros(candidate.m)
    return _Frame(
        phi=positive_jet(candidate.phi, xi, "phi"),
        f=positive_jet(candidate.f, xi, "f"),
        tau=tau,
        alpha=candidate.alpha.vector,
        beta=beta,
        eps=candidate.base.eps,
        eps_fiber=candidate.fiber.eps,
    )


def metric_with_partials(candidate: WarpedCandidate, position: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonal G of the metric and its partials dG[a, b] = ∂_a G_b.

    Args:
        candidate: warped-product candidate
        position: point of R^(n+m)

    Returns:
        (G, dG)
    """
    n, m = candidate.n, candidate.m
    fr = _frame(candidate, position)
    phi, f, tau = fr.phi, fr.f, fr.tau
    base = fr.eps / phi.value ** 2
    fiber = fr.eps_fiber * f.value ** 2 / tau.value ** 2

    dG = np.zeros((n + m, n + m))
    dG[:n, :n] = np.outer(fr.alpha, -2.0 * fr.eps * phi.d1 / phi.value ** 3)
    dG[:n, n:] = np.outer(fr.alpha, 2.0 * fr.eps_fiber * f.value * f.d1 / tau.value ** 2)
    dG[n:, n:] = np.outer(fr.beta, -2.0 * fr.eps_fiber * f.value ** 2 * tau.d1 / tau.value ** 3)
    return np.concatenate([base, fiber]), dG


def geodesic_rhs(candidate: WarpedCandidate, state: GeodesicState) -> Tuple[np.ndarray, np.ndarray]:
    """Velocity and acceleration -Γ^k_ij v^i v^j of the full metric."""
    G, dG = metric_with_partials(candidate, state.position)
    v = state.velocity
    acc = -0.5 / G * (2.0 * v * (v @ dG) - dG @ (v * v))
    return v, acc


def _split(candidate: WarpedCandidate, state: GeodesicState, connections: bool):
    n = candidate.n
    fr = _frame(candidate, state.position)
    phi, f, tau = fr.phi, fr.f, fr.tau
    vB, vF = state.velocity[:n], state.velocity[n:]
    xi_rate = float(fr.alpha @ vB)
    fiber_sq = float(np.sum(fr.eps_fiber * vF * vF))
    grad_f = f.value * phi.value ** 2 * f.d1 * (fr.eps * fr.alpha)

    if not connections:
        return np.concatenate([fiber_sq * grad_f, -2.0 * (f.d1 * xi_rate / f.value) * vF])

    r_phi = phi.d1 / phi.value
    r_tau = tau.d1 / tau.value
    zeta_rate = float(fr.beta @ vF)
    base_sq = float(np.sum(fr.eps * vB * vB))
    aB = (
        2.0 * r_phi * xi_rate * vB
        - r_phi * base_sq * (fr.eps * fr.alpha)
        + (fiber_sq / tau.value ** 2) * grad_f
    )
    aF = (
        2.0 * r_tau * zeta_rate * vF
        - r_tau * fiber_sq * (fr.eps_fiber * fr.beta)
        - 2.0 * (f.d1 * xi_rate / f.value) * vF
    )
    return np.concatenate([aB, aF])


def split_form_rhs(candidate: WarpedCandidate, state: GeodesicState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Warped-product split of the geodesic equation.

    γ_B'' = ∇^B_γ_B' γ_B' + g_F(γ_F', γ_F') f ∇f and
    γ_F'' = ∇^F_γ_F' γ_F' - (2/f) (f∘γ_B)' γ_F', with the conformal
    connections of φ^-2 g_0 and τ^-2 g_0' written out.
    """
    return state.velocity, _split(candidate, state, connections=True)


def flat_factor_rhs(candidate: WarpedCandidate, state: GeodesicState) -> Tuple[np.ndarray, np.ndarray]:
    """Split form with both factor connections dropped and g_F replaced by g_0'."""
    return state.velocity, _split(candidate, state, connections=False)


SYSTEMS: Dict[str, Callable] = {
    "levi-civita": geodesic_rhs,
    "split": split_form_rhs,
    "flat-factor": flat_factor_rhs,
}


def energy(candidate: WarpedCandidate, state: GeodesicState) -> float:
    """g(γ', γ')."""
    G, _ = metric_with_partials(candidate, state.position)
    return float(np.sum(G * state.velocity ** 2))


def fiber_invariant(candidate: WarpedCandidate, state: GeodesicState) -> float:
    """f⁴ |γ_F'|²_0, conserved by the flat-factor system."""
    n = candidate.n
    xi, _ = candidate.invariant_coordinates(state.position)
    f = positive_jet(candidate.f, xi, "f").value
    vF = state.velocity[n:]
    return float(f ** 4 * np.sum(candidate.fiber.eps * vF * vF))


def conserved_quantity(candidate: WarpedCandidate, state: GeodesicState, system: str) -> float:
    if system == "flat-factor":
        return fiber_invariant(candidate, state)
    return energy(candidate, state)


def warp_acceleration(candidate: WarpedCandidate, state: GeodesicState, system: str) -> float:
    """First base component of the warping term g_F(γ_F', γ_F') f φ² f' ε_1 α_1."""
    n = candidate.n
    fr = _frame(candidate, state.position)
    vF = state.velocity[n:]
    fiber_sq = float(np.sum(fr.eps_fiber * vF * vF))
    if system != "flat-factor":
        fiber_sq /= fr.tau.value ** 2
    return fiber_sq * fr.f.value * fr.phi.value ** 2 * fr.f.d1 * fr.eps[0] * fr.alpha[0]
