"""
Adaptive geodesic integration with inspected steps.

Each direction (+s and -s) is integrated with a scipy Runge-Kutta stepper so that
every accepted step can be checked for step-size collapse, divergence of the state
norm and domain exit.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import DOP853, RK45

from core.errors import NonPositiveProfileError, ProfileDomainError, ShapeError
from core.factors import WarpedCandidate, positive_jet

from .flow import SYSTEMS, GeodesicState, conserved_quantity, energy

logger = logging.getLogger(__name__)

STEPPERS = {"DOP853": DOP853, "RK45": RK45}


class TerminationKind(Enum):
    REACHED_S_MAX = "reached-s-max"
    STEP_COLLAPSE = "step-collapse"
    DIVERGED = "diverged"
    LEFT_DOMAIN = "left-domain"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    s: float
    norm: Optional[float] = None
    detail: str = ""

    @property
    def early(self) -> bool:
        return self.kind is not TerminationKind.REACHED_S_MAX

    def to_json(self) -> Dict:
        out = {"kind": self.kind.value, "s": self.s}
        if self.norm is not None:
            out["norm"] = self.norm
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class IntegratorSettings:
    """Stepper choice and early-termination thresholds."""
    method: str = "DOP853"
    collapse: float = 1e-12
    divergence: float = 1e12
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in STEPPERS:
            raise ValueError(f"Unknown stepper '{self.method}', choose from {sorted(STEPPERS)}")
        if self.collapse <= 0.0 or self.divergence <= 0.0 or self.max_steps < 1:
            raise ValueError("Termination thresholds must be positive")

    @classmethod
    def from_json(cls, data: Dict) -> "IntegratorSettings":
        return cls(
            method=data.get("method", "DOP853"),
            collapse=float(data.get("collapse", 1e-12)),
            divergence=float(data.get("divergence", 1e12)),
            max_steps=int(data.get("max_steps", 1_000_000)),
        )


@dataclass
class GeodesicTrajectory:
    samples: List[GeodesicState]
    forward: Termination
    backward: Optional[Termination]
    causal_character: float
    conserved: np.ndarray
    system: str = "levi-civita"
    tol: float = 1e-10
    extras: Dict = field(default_factory=dict)

    @property
    def terminations(self) -> List[Termination]:
        return [t for t in (self.backward, self.forward) if t is not None]

    @property
    def termination(self) -> Termination:
        """The first early termination, or the forward one if both ends reached s_max."""
        for t in self.terminations:
            if t.early:
                return t
        return self.forward

    @property
    def early(self) -> bool:
        return any(t.early for t in self.terminations)

    @property
    def s(self) -> np.ndarray:
        return np.array([x.s for x in self.samples])

    @property
    def drift(self) -> np.ndarray:
        """|C(s) - C(0)| of the conserved quantity at every sample."""
        idx = int(np.argmin(np.abs(self.s)))
        return np.abs(self.conserved - self.conserved[idx])

    @property
    def max_drift(self) -> float:
        return float(np.max(self.drift)) if len(self.samples) else 0.0

    def state_at(self, s: float) -> GeodesicState:
        """Sample closest to s."""
        return self.samples[int(np.argmin(np.abs(self.s - s)))]

    def table(self) -> Tuple[List[str], np.ndarray]:
        """Columns s, x_1..x_D, v_1..v_D, drift."""
        d = self.samples[0].dim
        header = ["s"] + [f"x{i + 1}" for i in range(d)] + [f"v{i + 1}" for i in range(d)] + ["drift"]
        rows = np.array([np.concatenate([[x.s], x.position, x.velocity]) for x in self.samples])
        return header, np.column_stack([rows, self.drift])

    def to_json(self) -> Dict:
        return {
            "system": self.system,
            "causal_character": self.causal_character,
            "samples": len(self.samples),
            "s_range": [float(self.samples[0].s), float(self.samples[-1].s)],
            "terminations": [t.to_json() for t in self.terminations],
            "early": self.early,
            "max_drift": self.max_drift,
        }


_DOMAIN_ERRORS = (ProfileDomainError, NonPositiveProfileError)


def _vector_field(candidate: WarpedCandidate, system: str):
    rhs = SYSTEMS[system]

    def fun(s, y):
        v, a = rhs(candidate, GeodesicState.from_array(s, y))
        return np.concatenate([v, a])

    return fun


def _run(fun, y0: np.ndarray, s0: float, bound: float, tol: float, settings: IntegratorSettings):
    stepper = STEPPERS[settings.method](fun, s0, y0, bound, rtol=tol, atol=tol)
    samples = []
    for _ in range(settings.max_steps):
        try:
            message = stepper.step()
        except _DOMAIN_ERRORS as e:
            return samples, Termination(TerminationKind.LEFT_DOMAIN, float(stepper.t), detail=str(e))
        except (OverflowError, FloatingPointError) as e:
            return samples, Termination(TerminationKind.DIVERGED, float(stepper.t), norm=float("inf"), detail=str(e))
        s = float(stepper.t)
        if stepper.status == "failed":
            return samples, Termination(TerminationKind.STEP_COLLAPSE, s, detail=str(message))
        norm = float(np.linalg.norm(stepper.y))
        if not np.isfinite(norm) or norm > settings.divergence:
            return samples, Termination(TerminationKind.DIVERGED, s, norm=norm)
        samples.append(GeodesicState.from_array(s, stepper.y))
        if stepper.status == "finished":
            return samples, Termination(TerminationKind.REACHED_S_MAX, s)
        step = stepper.step_size
        if step is not None and step < settings.collapse * (1.0 + abs(s)):
            return samples, Termination(TerminationKind.STEP_COLLAPSE, s, detail=f"step {step:.3e}")
    return samples, Termination(TerminationKind.STEP_COLLAPSE, float(stepper.t), detail="max_steps exhausted")


def integrate_geodesic(
    candidate: WarpedCandidate,
    init: GeodesicState,
    s_max: float,
    tol: float = 1e-10,
    system: str = "levi-civita",
    settings: Optional[IntegratorSettings] = None,
    both_directions: bool = True,
) -> GeodesicTrajectory:
    """
    Integrate a geodesic from init to init.s + s_max (and init.s - s_max).

    Args:
        candidate: warped-product candidate providing the metric
        init: initial position and velocity
        s_max: parameter length in each direction
        tol: relative and absolute stepper tolerance
        system: 'levi-civita', 'split' or 'flat-factor'
        settings: stepper and termination thresholds
        both_directions: integrate backwards as well

    Returns:
        GeodesicTrajectory with samples sorted by s
    """
    if system not in SYSTEMS:
        raise ValueError(f"Unknown geodesic system '{system}', choose from {sorted(SYSTEMS)}")
    if init.dim != candidate.n + candidate.m:
        raise ShapeError(f"Initial state has dimension {init.dim}, expected {candidate.n + candidate.m}")
    if s_max <= 0.0:
        raise ValueError(f"s_max must be positive, got {s_max}")
    settings = settings or IntegratorSettings()
    fun = _vector_field(candidate, system)
    y0 = init.as_array()

    try:
        fun(init.s, y0)
        causal = energy(candidate, init)
    except _DOMAIN_ERRORS as e:
        logger.warning(f"Initial state outside the domain: {e}")
        left = Termination(TerminationKind.LEFT_DOMAIN, init.s, detail=str(e))
        return GeodesicTrajectory([init], left, left if both_directions else None,
                                  float("nan"), np.array([np.nan]), system, tol)

    forward_samples, forward = _run(fun, y0, init.s, init.s + s_max, tol, settings)
    backward_samples, backward = [], None
    if both_directions:
        backward_samples, backward = _run(fun, y0, init.s, init.s - s_max, tol, settings)

    samples = list(reversed(backward_samples)) + [init] + forward_samples
    conserved = np.array([_safe_conserved(candidate, x, system) for x in samples])
    for t in (backward, forward):
        if t is not None and t.early:
            logger.debug(f"Geodesic terminated early: {t.kind.value} at s={t.s:.6g}")
    return GeodesicTrajectory(samples, forward, backward, causal, conserved, system, tol)


def _safe_conserved(candidate: WarpedCandidate, state: GeodesicState, system: str) -> float:
    try:
        return conserved_quantity(candidate, state, system)
    except _DOMAIN_ERRORS:
        return float("nan")


def reversed_return(
    candidate: WarpedCandidate,
    init: GeodesicState,
    s: float,
    tol: float = 1e-10,
    system: str = "levi-civita",
    settings: Optional[IntegratorSettings] = None,
) -> float:
    """
    Integrate to +s, reverse the velocity, integrate s again.

    Returns:
        Euclidean distance between the returned position and init.position
    """
    out = integrate_geodesic(candidate, init, s, tol, system, settings, both_directions=False)
    if out.early:
        raise ValueError(f"Outbound leg terminated early: {out.forward.kind.value}")
    end = out.samples[-1]
    back = integrate_geodesic(candidate, GeodesicState(0.0, end.position, -end.velocity),
                              s, tol, system, settings, both_directions=False)
    if back.early:
        raise ValueError(f"Return leg terminated early: {back.forward.kind.value}")
    return float(np.linalg.norm(back.samples[-1].position - init.position))


def exponential_warp_closed_form(candidate: WarpedCandidate, init: GeodesicState, s: float) -> np.ndarray:
    """
    Position at parameter s of the flat-factor system when f = φ = k·e^{Aξ} and α is null.

    ξ' stays c₁ = α·v_B(0); the fiber moves as y₀ + v₀ s (c₁ = 0) or
    y₀ + v₀(1 - e^{-2Ac₁s})/(2Ac₁); the base accelerates uniformly along ε∘α.
    """
    n = candidate.n
    x0, y0 = init.position[:n], init.position[n:]
    vB, vF = init.velocity[:n], init.velocity[n:]
    xi0, _ = candidate.invariant_coordinates(init.position)
    f = positive_jet(candidate.f, xi0, "f")
    phi = positive_jet(candidate.phi, xi0, "phi")
    rate = f.d1 / f.value
    alpha = candidate.alpha.vector
    eps = candidate.base.eps
    c1 = float(alpha @ vB)
    t = s - init.s

    if abs(rate * c1) < 1e-15:
        y = y0 + vF * t
    else:
        y = y0 + vF * (1.0 - np.exp(-2.0 * rate * c1 * t)) / (2.0 * rate * c1)

    fiber_sq = float(np.sum(candidate.fiber.eps * vF * vF))
    c = fiber_sq * f.value * phi.value ** 2 * f.d1
    x = x0 + vB * t + 0.5 * c * t * t * (eps * alpha)
    return np.concatenate([x, y])
