"""
Curvature of the warped product B ×_f F with conformal base and fiber.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from core.errors import ShapeError
from core.factors import WarpedCandidate, positive_jet
from .conformal import (
    conformal_hessian,
    conformal_laplacian,
    conformal_metric,
    conformal_ricci,
    gradient_norm_sq,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockMatrix:
    """Symmetric (n+m)×(n+m) tensor split into base, mixed and fiber blocks."""
    base_block: np.ndarray
    mixed_block: np.ndarray
    fiber_block: np.ndarray

    def __post_init__(self):
        n, m = self.base_block.shape[0], self.fiber_block.shape[0]
        if self.base_block.shape != (n, n) or self.fiber_block.shape != (m, m):
            raise ShapeError("base and fiber blocks must be square")
        if self.mixed_block.shape != (n, m):
            raise ShapeError(f"mixed block has shape {self.mixed_block.shape}, expected ({n}, {m})")

    @property
    def n(self) -> int:
        return self.base_block.shape[0]

    @property
    def m(self) -> int:
        return self.fiber_block.shape[0]

    @classmethod
    def zeros(cls, n: int, m: int) -> "BlockMatrix":
        return cls(np.zeros((n, n)), np.zeros((n, m)), np.zeros((m, m)))

    @classmethod
    def split(cls, matrix: np.ndarray, n: int) -> "BlockMatrix":
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix[:n, :n].copy(), matrix[:n, n:].copy(), matrix[n:, n:].copy())

    def assemble(self) -> np.ndarray:
        top = np.hstack([self.base_block, self.mixed_block])
        bottom = np.hstack([self.mixed_block.T, self.fiber_block])
        return np.vstack([top, bottom])

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(
            self.base_block + other.base_block,
            self.mixed_block + other.mixed_block,
            self.fiber_block + other.fiber_block,
        )

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(
            self.base_block - other.base_block,
            self.mixed_block - other.mixed_block,
            self.fiber_block - other.fiber_block,
        )

    def scaled(self, c: float) -> "BlockMatrix":
        return BlockMatrix(c * self.base_block, c * self.mixed_block, c * self.fiber_block)

    def sup_norms(self) -> Dict[str, float]:
        """Max absolute entry of each block."""
        return {
            "base": float(np.max(np.abs(self.base_block))),
            "mixed": float(np.max(np.abs(self.mixed_block))) if self.mixed_block.size else 0.0,
            "fiber": float(np.max(np.abs(self.fiber_block))),
        }

    def to_json(self) -> Dict[str, list]:
        return {
            "base": self.base_block.tolist(),
            "mixed": self.mixed_block.tolist(),
            "fiber": self.fiber_block.tolist(),
        }


@dataclass(frozen=True)
class MetricField:
    """Diagonal metric on R^dim given by a function returning its diagonal."""
    dim: int
    diagonal: Callable[[np.ndarray], np.ndarray]

    def __call__(self, point: np.ndarray) -> np.ndarray:
        return np.diag(self.diagonal(np.asarray(point, dtype=float)))


def fiber_metric(candidate: WarpedCandidate, zeta: float) -> np.ndarray:
    """Diagonal of g_F: τ^-2 g_0' when τ is present, else g_0'."""
    if candidate.tau is None:
        return candidate.fiber.eps
    return conformal_metric(candidate.tau, candidate.fiber, zeta)


def product_metric(candidate: WarpedCandidate, xi: float, zeta: float) -> np.ndarray:
    """Diagonal of g = φ^-2 g_0 + f² g_F at invariant coordinates (ξ, ζ)."""
    f = positive_jet(candidate.f, xi, "f").value
    return np.concatenate([
        conformal_metric(candidate.phi, candidate.base, xi),
        f * f * fiber_metric(candidate, zeta),
    ])


def metric_field(candidate: WarpedCandidate) -> MetricField:
    """Full (n+m)-dimensional metric of a candidate as a function of the point."""
    if candidate.tau is None and candidate.mu != 0.0:
        logger.warning(
            f"Candidate '{candidate.label}' has no fiber factor tau; the flat fiber used for "
            f"the metric field is not Einstein with mu={candidate.mu}"
        )

    def diagonal(point: np.ndarray) -> np.ndarray:
        xi, zeta = candidate.invariant_coordinates(point)
        return product_metric(candidate, xi, zeta)

    return MetricField(candidate.n + candidate.m, diagonal)


def fiber_ricci(candidate: WarpedCandidate, zeta: float) -> np.ndarray:
    """Ric of g_F: conformal Ricci of τ, or mu * g_F for a generic Einstein fiber."""
    if candidate.tau is None:
        return candidate.mu * np.diag(candidate.fiber.eps)
    return conformal_ricci(candidate.tau, candidate.beta, candidate.fiber, zeta)


def warped_ricci(candidate: WarpedCandidate, point: Tuple[float, float]) -> BlockMatrix:
    """
    Ricci tensor of the warped product at invariant coordinates (ξ, ζ).

    Args:
        candidate: warped-product candidate
        point: (ξ, ζ)

    Returns:
        BlockMatrix with base Ric_B - (m/f) Hess f, zero mixed block and
        fiber Ric_F - (f Δf + (m-1)|∇f|²) g_F
    """
    xi, zeta = point
    c = candidate
    f = positive_jet(c.f, xi, "f").value
    base = conformal_ricci(c.phi, c.alpha, c.base, xi) - (c.m / f) * conformal_hessian(
        c.f, c.phi, c.alpha, c.base, xi
    )
    bracket = f * conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi) + (c.m - 1) * gradient_norm_sq(
        c.f, c.phi, c.alpha, c.base, xi
    )
    fiber = fiber_ricci(c, zeta) - bracket * np.diag(fiber_metric(c, zeta))
    return BlockMatrix(base, np.zeros((c.n, c.m)), fiber)
