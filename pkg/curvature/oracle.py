"""
Finite-difference Ricci oracle on the full product metric.

The oracle only samples the metric matrix: first and second partials come
from central stencils, Christoffel symbols and their derivatives are then
assembled with einsum. It shares no formula with the closed-form operators.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from core.errors import ShapeError, SingularMetricError
from core.factors import WarpedCandidate
from .warped import BlockMatrix, MetricField, metric_field, warped_ricci

logger = logging.getLogger(__name__)

DEFAULT_RELATIVE_STEP = np.finfo(float).eps ** 0.25
SINGULAR_CONDITION = 1.0 / np.finfo(float).eps


def default_steps(point: np.ndarray, base_step: Optional[float] = None) -> np.ndarray:
    """Per-coordinate steps: base_step·(1+|x_k|), base_step defaulting to eps^(1/4)."""
    base_step = DEFAULT_RELATIVE_STEP if base_step is None else base_step
    return base_step * (1.0 + np.abs(point))


def _sample(metric: MetricField, point: np.ndarray) -> np.ndarray:
    g = metric(point)
    if not np.all(np.isfinite(g)) or np.linalg.cond(g) > SINGULAR_CONDITION:
        raise SingularMetricError(f"singular metric at stencil point {point.tolist()}")
    return g


def metric_partials(metric: MetricField, point: np.ndarray, steps: np.ndarray):
    """g, ∂_k g_ij and ∂_k∂_l g_ij by central differences."""
    d = metric.dim
    eye = np.eye(d)
    g = _sample(metric, point)
    plus = [_sample(metric, point + steps[k] * eye[k]) for k in range(d)]
    minus = [_sample(metric, point - steps[k] * eye[k]) for k in range(d)]

    dg = np.empty((d, d, d))
    ddg = np.empty((d, d, d, d))
    for k in range(d):
        dg[k] = (plus[k] - minus[k]) / (2.0 * steps[k])
        ddg[k, k] = (plus[k] - 2.0 * g + minus[k]) / steps[k] ** 2
        for l in range(k + 1, d):
            ek, el = steps[k] * eye[k], steps[l] * eye[l]
            mixed = (
                _sample(metric, point + ek + el)
                - _sample(metric, point + ek - el)
                - _sample(metric, point - ek + el)
                + _sample(metric, point - ek - el)
            ) / (4.0 * steps[k] * steps[l])
            ddg[k, l] = mixed
            ddg[l, k] = mixed
    return g, dg, ddg


def ricci_from_partials(g: np.ndarray, dg: np.ndarray, ddg: np.ndarray) -> np.ndarray:
    """R_ij = ∂_kΓ^k_ij - ∂_jΓ^k_ik + Γ^k_kl Γ^l_ij - Γ^k_jl Γ^l_ik."""
    ginv = np.linalg.inv(g)
    # lowered[l,i,j] = ∂_i g_jl + ∂_j g_il - ∂_l g_ij
    lowered = np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, lowered)

    d_lowered = (
        np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg) - ddg
    )
    d_ginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    d_gamma = 0.5 * (
        np.einsum("mkl,lij->mkij", d_ginv, lowered)
        + np.einsum("kl,mlij->mkij", ginv, d_lowered)
    )
    return (
        np.einsum("kkij->ij", d_gamma)
        - np.einsum("jkik->ij", d_gamma)
        + np.einsum("kkl,lij->ij", gamma, gamma)
        - np.einsum("kjl,lik->ij", gamma, gamma)
    )


def fd_ricci(metric: MetricField, point: Sequence[float], step: Optional[float] = None) -> np.ndarray:
    """
    Ricci tensor of a metric field by finite differences.

    Args:
        metric: metric field on R^dim
        point: evaluation point
        step: uniform stencil step; None uses eps^(1/4)·(1+|x_k|) per coordinate

    Returns:
        (dim, dim) matrix
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (metric.dim,):
        raise ShapeError(f"Point has shape {point.shape}, metric has dim {metric.dim}")
    if step is None:
        steps = default_steps(point)
    elif step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    else:
        steps = np.full(metric.dim, float(step))
    return ricci_from_partials(*metric_partials(metric, point, steps))


@dataclass
class OracleReport:
    """Blockwise max error of fd_ricci against warped_ricci, one entry per step."""
    steps: List[float]
    block_errors: List[Dict[str, float]]
    errors: List[float]
    ratios: List[float] = field(default_factory=list)
    points: int = 0

    def ratios_within(self, low: float, high: float) -> bool:
        return all(low <= r <= high for r in self.ratios)

    def to_json(self) -> Dict:
        return {
            "steps": self.steps,
            "block_errors": self.block_errors,
            "errors": self.errors,
            "ratios": self.ratios,
            "points": self.points,
        }


def oracle_check(
    candidate: WarpedCandidate,
    points: Sequence[Sequence[float]],
    steps: Sequence[float],
) -> OracleReport:
    """
    Compare the finite-difference Ricci tensor with the closed form.

    Args:
        candidate: candidate whose full metric is sampled
        points: points of R^(n+m)
        steps: stencil steps; successive error ratios are reported

    Returns:
        OracleReport
    """
    metric = metric_field(candidate)
    block_errors = []
    for step in steps:
        worst = {"base": 0.0, "mixed": 0.0, "fiber": 0.0}
        for point in points:
            point = np.asarray(point, dtype=float)
            closed = warped_ricci(candidate, candidate.invariant_coordinates(point))
            numeric = BlockMatrix.split(fd_ricci(metric, point, step), candidate.n)
            for block, err in (numeric - closed).sup_norms().items():
                worst[block] = max(worst[block], err)
        logger.debug(f"Oracle step {step}: {worst}")
        block_errors.append(worst)

    errors = [max(e.values()) for e in block_errors]
    ratios = [
        errors[i] / errors[i + 1] if errors[i + 1] > 0.0 else float("inf")
        for i in range(len(errors) - 1)
    ]
    logger.info(f"Oracle errors {errors} ratios {ratios}")
    return OracleReport(list(map(float, steps)), block_errors, errors, ratios, len(points))
