"""
Numerical completeness probe.

Integrates a seeded batch of geodesics in both directions and counts those that
stop before the requested parameter length. The summary never claims completeness.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from core.errors import NonPositiveProfileError, ProfileDomainError
from core.factors import WarpedCandidate

from .flow import GeodesicState, metric_with_partials, warp_acceleration
from .integrate import GeodesicTrajectory, IntegratorSettings, integrate_geodesic

logger = logging.getLogger(__name__)

PROBE_SCHEMA = "probe-v1"
CAUSAL_TARGETS = ("null", "timelike", "spacelike")
BOUND_SLACK = 1e-6
_MAX_TRIES = 200


def causal_kind(G: np.ndarray, v: np.ndarray) -> str:
    """Causal character of v under the diagonal metric G."""
    gvv = float(np.sum(G * v * v))
    if abs(gvv) <= 1e-12 * float(np.sum(np.abs(G) * v * v)):
        return "null"
    return "spacelike" if gvv > 0.0 else "timelike"


def _null_by_scaling(G: np.ndarray, v: np.ndarray) -> Optional[np.ndarray]:
    positive = np.where(G > 0.0, v, 0.0)
    negative = np.where(G < 0.0, v, 0.0)
    a = float(np.sum(G * positive ** 2))
    b = -float(np.sum(G * negative ** 2))
    if a <= 0.0 or b <= 0.0:
        return None
    return positive + negative * np.sqrt(a / b)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def sample_position(candidate: WarpedCandidate, rng: np.random.Generator) -> np.ndarray:
    """Uniform point of [-0.5, 0.5]^(n+m), resampled until the metric is defined there."""
    d = candidate.n + candidate.m
    for _ in range(_MAX_TRIES):
        point = rng.uniform(-0.5, 0.5, d)
        try:
            metric_with_partials(candidate, point)
        except (ProfileDomainError, NonPositiveProfileError):
            continue
        return point
    raise ProfileDomainError("No sampled point of [-0.5, 0.5]^(n+m) lies in the candidate's domain")


def _rejection(G: np.ndarray, draw: Callable[[], np.ndarray], target: str) -> Optional[np.ndarray]:
    for _ in range(_MAX_TRIES):
        v = draw()
        if np.linalg.norm(v) > 0.0 and causal_kind(G, v) == target:
            return _unit(v)
    return None


def generic_velocity(candidate, point, rng, target):
    """Random velocity of the requested causal character, or the closest achievable one."""
    G, _ = metric_with_partials(candidate, point)
    d = G.shape[0]
    if target == "null":
        for _ in range(_MAX_TRIES):
            v = _null_by_scaling(G, rng.normal(size=d))
            if v is not None and np.linalg.norm(v) > 0.0:
                return _unit(v)
    else:
        v = _rejection(G, lambda: rng.normal(size=d), target)
        if v is not None:
            return v
    return _unit(rng.normal(size=d))


def _project_transverse(candidate: WarpedCandidate, v: np.ndarray) -> np.ndarray:
    n = candidate.n
    vB, vF = v[:n].copy(), v[n:].copy()
    a = candidate.alpha.vector
    vB -= (a @ vB) / (a @ a) * a
    if candidate.beta is not None:
        b = candidate.beta.vector
        vF -= (b @ vF) / (b @ b) * b
    return np.concatenate([vB, vF])


def transverse_velocity(candidate, point, rng, target):
    """
    Random velocity with α·v_B = 0 and β·v_F = 0, so that ξ'(0) = ζ'(0) = 0.

    Null targets use ε∘α (and ε'∘β) when those directions are null and transverse.
    """
    G, _ = metric_with_partials(candidate, point)
    d = G.shape[0]
    draw = lambda: _project_transverse(candidate, rng.normal(size=d))
    if target == "null" and candidate.alpha.is_null:
        n = candidate.n
        v = np.zeros(d)
        v[:n] = candidate.base.eps * candidate.alpha.vector * rng.choice([-1.0, 1.0])
        if candidate.beta is not None and candidate.beta.is_null:
            v[n:] = candidate.fiber.eps * candidate.beta.vector * rng.normal()
        return _unit(v)
    v = _rejection(G, draw, target)
    if v is not None:
        return v
    for _ in range(_MAX_TRIES):
        v = draw()
        if np.linalg.norm(v) > 0.0:
            return _unit(v)
    raise ValueError("Transverse subspace is trivial")


SAMPLERS = {
    "generic": generic_velocity,
    "transverse": transverse_velocity,
}


def initial_states(candidate: WarpedCandidate, sampler: str, count: int, seed: int) -> List[GeodesicState]:
    """Seeded initial states; state i targets CAUSAL_TARGETS[i % 3]."""
    if sampler not in SAMPLERS:
        raise ValueError(f"Unknown sampler '{sampler}', choose from {sorted(SAMPLERS)}")
    draw_velocity = SAMPLERS[sampler]
    states = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(count)):
        rng = np.random.default_rng(child)
        point = sample_position(candidate, rng)
        velocity = draw_velocity(candidate, point, rng, CAUSAL_TARGETS[i % 3])
        states.append(GeodesicState(0.0, point, velocity))
    return states


def bound_ratio(candidate: WarpedCandidate, trajectory: GeodesicTrajectory) -> Optional[float]:
    """
    sup_s |warp part of y₁''(s)| / |c₁₀,₁| along a trajectory.

    c₁₀,₁ is the warp part at the initial state; None when it vanishes.
    """
    start = trajectory.state_at(0.0)
    c10 = warp_acceleration(candidate, start, trajectory.system)
    if c10 == 0.0:
        return None
    values = []
    for state in trajectory.samples:
        try:
            values.append(abs(warp_acceleration(candidate, state, trajectory.system)))
        except (ProfileDomainError, NonPositiveProfileError):
            continue
    return max(values) / abs(c10)


@dataclass
class ProbeSummary:
    label: str
    system: str
    sampler: str
    count: int
    s_max: float
    seed: int
    early_terminations: int
    termination_counts: Dict[str, int]
    causal_requested: Dict[str, int]
    causal_achieved: Dict[str, int]
    max_drift: float
    bound_ratio: Optional[float]
    notes: List[str] = field(default_factory=list)

    @property
    def early_fraction(self) -> float:
        return self.early_terminations / self.count

    @property
    def bound_holds(self) -> Optional[bool]:
        if self.bound_ratio is None:
            return None
        return bool(self.bound_ratio <= 1.0 + BOUND_SLACK)

    @property
    def statement(self) -> str:
        if self.early_terminations == 0:
            return f"no finite-parameter obstruction detected up to s_max={self.s_max:g}"
        return (
            f"finite-parameter obstruction detected in {self.early_terminations} of "
            f"{self.count} geodesics before s_max={self.s_max:g}"
        )

    def to_json(self) -> Dict:
        return {
            "schema": PROBE_SCHEMA,
            "candidate": self.label,
            "system": self.system,
            "sampler": self.sampler,
            "count": self.count,
            "s_max": self.s_max,
            "seed": self.seed,
            "early_terminations": self.early_terminations,
            "early_fraction": self.early_fraction,
            "termination_counts": dict(self.termination_counts),
            "causal_requested": dict(self.causal_requested),
            "causal_achieved": dict(self.causal_achieved),
            "max_drift": self.max_drift,
            "bound_ratio": self.bound_ratio,
            "bound_holds": self.bound_holds,
            "statement": self.statement,
            "notes": list(self.notes),
        }


def completeness_probe(
    candidate: WarpedCandidate,
    sampler: str = "generic",
    count: int = 50,
    s_max: float = 1e3,
    seed: int = 0,
    tol: float = 1e-10,
    system: str = "levi-civita",
    settings: Optional[IntegratorSettings] = None,
    workers: int = 1,
) -> ProbeSummary:
    """
    Integrate count seeded geodesics to ±s_max and summarize their terminations.

    Args:
        candidate: warped-product candidate
        sampler: 'generic' or 'transverse'
        count: number of geodesics
        s_max: parameter length in each direction
        seed: root seed of the per-trajectory generators
        tol: stepper tolerance
        system: geodesic right-hand side
        settings: stepper and termination thresholds
        workers: thread count for the trajectory fan-out

    Returns:
        ProbeSummary
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    logger.info(f"Probing {count} geodesics of {candidate.label or 'candidate'} to s_max={s_max:g} ({sampler}, {system})")
    states = initial_states(candidate, sampler, count, seed)

    def run(state):
        return integrate_geodesic(candidate, state, s_max, tol, system, settings)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trajectories = list(pool.map(run, states))
    else:
        trajectories = [run(state) for state in states]

    termination_counts = {}
    for trajectory in trajectories:
        for t in trajectory.terminations:
            termination_counts[t.kind.value] = termination_counts.get(t.kind.value, 0) + 1

    requested = {kind: 0 for kind in CAUSAL_TARGETS}
    achieved = {kind: 0 for kind in CAUSAL_TARGETS}
    for i, state in enumerate(states):
        requested[CAUSAL_TARGETS[i % 3]] += 1
        G, _ = metric_with_partials(candidate, state.position)
        achieved[causal_kind(G, state.velocity)] += 1

    notes = []
    for kind in CAUSAL_TARGETS:
        if requested[kind] and not achieved[kind]:
            notes.append(f"{sampler} sampler produced no {kind} initial velocities")
    if sampler == "transverse" and requested["timelike"] and not achieved["timelike"]:
        notes.append("the transverse subspace contains no timelike vectors")

    ratios = [r for r in (bound_ratio(candidate, t) for t in trajectories) if r is not None]
    drifts = [t.max_drift for t in trajectories if np.isfinite(t.max_drift)]
    early = sum(1 for t in trajectories if t.early)
    if early:
        logger.warning(f"{early} of {count} geodesics terminated before s_max")

    return ProbeSummary(
        label=candidate.label,
        system=system,
        sampler=sampler,
        count=count,
        s_max=float(s_max),
        seed=int(seed),
        early_terminations=early,
        termination_counts=termination_counts,
        causal_requested=requested,
        causal_achieved=achieved,
        max_drift=max(drifts) if drifts else 0.0,
        bound_ratio=max(ratios) if ratios else None,
        notes=notes,
    )
