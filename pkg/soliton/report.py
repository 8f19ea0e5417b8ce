"""
Grid verification of a candidate and the ResidualReport it produces.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.factors import Placement, WarpedCandidate
from .diagnostics import drift_laplacian, mu_constant, xi_operator
from .equations import grhs_residual, reduced_residuals_base, reduced_residuals_fiber

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "report-v1"
CLOSED_FORM_TOLERANCE = 1e-8
NUMERICAL_TOLERANCE = 1e-6

GRHS_IDS = ["grhs.base", "grhs.mixed", "grhs.fiber", "harmonic"]
BASE_IDS = ["E1", "E2", "E3", "E4"]
FIBER_IDS = ["E1", "E2", "E3", "E4", "E5"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform sample grid over ξ (and ζ), shrunk away from the endpoints."""
    xi_span: Tuple[float, float]
    zeta_span: Optional[Tuple[float, float]] = None
    count: int = 101
    shrink: float = 0.01

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"grid count must be >= 1, got {self.count}")
        for span in (self.xi_span, self.zeta_span):
            if span is not None and not (np.isfinite(span).all() and span[0] < span[1]):
                raise ValueError(f"grid span must be a finite increasing interval, got {span}")

    def _axis(self, span: Tuple[float, float]) -> np.ndarray:
        lo, hi = span
        pad = self.shrink * (hi - lo)
        if self.count == 1:
            return np.array([0.5 * (lo + hi)])
        return np.linspace(lo + pad, hi - pad, self.count)

    def points(self) -> List[Tuple[float, float]]:
        """(ξ, ζ) pairs; the two axes are zipped, ζ is 0 without a ζ span."""
        xs = self._axis(self.xi_span)
        zs = self._axis(self.zeta_span) if self.zeta_span is not None else np.zeros_like(xs)
        return [(float(x), float(z)) for x, z in zip(xs, zs)]

    def to_json(self) -> Dict[str, Any]:
        return {
            "xi_span": list(self.xi_span),
            "zeta_span": list(self.zeta_span) if self.zeta_span is not None else None,
            "count": self.count,
            "shrink": self.shrink,
        }


@dataclass
class ResidualReport:
    """Sup-norm residual of every checked equation over a grid."""
    equation_ids: List[str]
    sup_residuals: List[float]
    grid: GridSpec
    tolerance: float
    passed: bool = field(init=False)
    candidate: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.passed = all(r <= self.tolerance for r in self.sup_residuals)

    def residual(self, equation_id: str) -> float:
        return self.sup_residuals[self.equation_ids.index(equation_id)]

    def failures(self) -> List[str]:
        return [e for e, r in zip(self.equation_ids, self.sup_residuals) if r > self.tolerance]

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "candidate": self.candidate,
            "equations": self.equation_ids,
            "sup_residuals": self.sup_residuals,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "grid": self.grid.to_json(),
            "details": self.details,
        }


def equation_ids(candidate: WarpedCandidate) -> List[str]:
    ids = list(GRHS_IDS)
    if candidate.u_placement is Placement.BASE:
        if candidate.tau is None:
            ids += BASE_IDS
        ids += ["mu-const", "drift", "xi"]
    else:
        if candidate.tau is not None:
            ids += FIBER_IDS
        ids += ["mu-const", "xi"]
    return ids


def point_residuals(candidate: WarpedCandidate, point: Tuple[float, float]) -> Dict[str, float]:
    """Absolute residual of every applicable equation at one grid point."""
    xi, zeta = point
    tensor, tension = grhs_residual(candidate, point)
    norms = tensor.sup_norms()
    out = {
        "grhs.base": norms["base"],
        "grhs.mixed": norms["mixed"],
        "grhs.fiber": norms["fiber"],
        "harmonic": abs(tension),
    }
    if candidate.u_placement is Placement.BASE:
        if candidate.tau is None:
            out.update(zip(BASE_IDS, map(abs, reduced_residuals_base(candidate, xi))))
        out["drift"] = abs(drift_laplacian(candidate, xi))
    elif candidate.tau is not None:
        out.update(zip(FIBER_IDS, map(abs, reduced_residuals_fiber(candidate, xi, zeta))))
    mu = mu_constant(candidate, xi)
    out["mu-const"] = abs(mu - candidate.mu)
    out["xi"] = abs(xi_operator(candidate, xi))
    out["_mu"] = mu
    return out


def default_tolerance(candidate: WarpedCandidate) -> float:
    return CLOSED_FORM_TOLERANCE if candidate.is_closed_form else NUMERICAL_TOLERANCE


def verify(
    candidate: WarpedCandidate,
    grid: GridSpec,
    tolerance: Optional[float] = None,
    workers: int = 1,
) -> ResidualReport:
    """
    Evaluate every applicable equation on a grid and aggregate sup-norms.

    Args:
        candidate: candidate to check
        grid: sample grid
        tolerance: pass threshold; defaults by whether the candidate is closed form
        workers: thread count for the per-point fan-out

    Returns:
        ResidualReport
    """
    tolerance = default_tolerance(candidate) if tolerance is None else tolerance
    points = grid.points()
    ids = equation_ids(candidate)
    logger.info(f"Verifying '{candidate.label}' on {len(points)} points (tol {tolerance:g})")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: point_residuals(candidate, p), points))
    else:
        rows = [point_residuals(candidate, p) for p in points]

    sups = [float(max(row[e] for row in rows)) for e in ids]
    mus = np.array([row["_mu"] for row in rows])
    details = {
        "mu": candidate.mu,
        "mu_spread": float(mus.max() - mus.min()),
        "closed_form": candidate.is_closed_form,
    }
    report = ResidualReport(ids, sups, grid, tolerance, candidate=candidate.label, details=details)
    if report.passed:
        logger.info(f"Verification of '{candidate.label}' passed")
    else:
        logger.info(f"Verification of '{candidate.label}' failed: {', '.join(report.failures())}")
    return report
