"""
Semi-Euclidean factors, invariant directions and warped-product candidates.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConstructionError, NonPositiveProfileError, PlacementError, ShapeError
from .profiles import Jet, Profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemiEuclideanFactor:
    """Flat factor R^dim with metric diag(signature)."""
    dim: int
    signature: Tuple[int, ...]

    def __post_init__(self):
        signature = tuple(int(e) for e in self.signature)
        object.__setattr__(self, "signature", signature)
        if self.dim < 1:
            raise ShapeError(f"Factor dimension must be >= 1, got {self.dim}")
        if len(signature) != self.dim:
            raise ShapeError(f"Signature length {len(signature)} does not match dim {self.dim}")
        if any(e not in (-1, 1) for e in signature):
            raise ShapeError(f"Signature entries must be -1 or +1: {signature}")

    @classmethod
    def of(cls, signature: Sequence[int]) -> "SemiEuclideanFactor":
        return cls(len(signature), tuple(signature))

    @classmethod
    def euclidean(cls, dim: int) -> "SemiEuclideanFactor":
        return cls(dim, (1,) * dim)

    @classmethod
    def lorentzian(cls, dim: int) -> "SemiEuclideanFactor":
        return cls(dim, (-1,) + (1,) * (dim - 1))

    @property
    def eps(self) -> np.ndarray:
        return np.asarray(self.signature, dtype=float)

    @property
    def index(self) -> int:
        return sum(1 for e in self.signature if e < 0)

    def inner(self, v: Sequence[float], w: Sequence[float]) -> float:
        """g_0(v, w)."""
        v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
        if v.shape != (self.dim,) or w.shape != (self.dim,):
            raise ShapeError(f"Expected vectors of length {self.dim}")
        return float(np.sum(self.eps * v * w))


def pseudo_norm_sq(coefficients: Sequence[float], factor: SemiEuclideanFactor) -> float:
    """
    Pseudo-norm of a direction under the flat metric of a factor.

    Args:
        coefficients: α (or β), one entry per coordinate
        factor: the factor carrying the signature ε

    Returns:
        Σ ε_i α_i²
    """
    coefficients = tuple(float(c) for c in coefficients)
    if len(coefficients) != factor.dim:
        raise ShapeError(f"Direction has {len(coefficients)} entries, factor has dim {factor.dim}")
    return float(sum(e * c * c for e, c in zip(factor.signature, coefficients)))


@dataclass(frozen=True)
class InvariantDirection:
    """Direction α defining the invariant coordinate ξ = Σ α_i x_i."""
    coefficients: Tuple[float, ...]
    factor: SemiEuclideanFactor
    pseudo_norm_sq: float = field(init=False)

    def __post_init__(self):
        coefficients = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coefficients)
        if not any(coefficients):
            raise ShapeError("Invariant direction must be non-zero")
        object.__setattr__(self, "pseudo_norm_sq", pseudo_norm_sq(coefficients, self.factor))

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    @property
    def is_null(self) -> bool:
        return self.pseudo_norm_sq == 0.0

    def coordinate(self, x: Sequence[float]) -> float:
        """Invariant coordinate of a point of the factor."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.factor.dim,):
            raise ShapeError(f"Point has shape {x.shape}, factor has dim {self.factor.dim}")
        return float(self.vector @ x)


class Placement(Enum):
    """Factor on which the harmonic map u lives."""
    BASE = "base"
    FIBER = "fiber"


_BASE_VARIABLES = {"xi", "t"}
_FIBER_VARIABLES = {"zeta", "t"}


def positive_jet(profile: Profile, t: float, name: str) -> Jet:
    """Evaluate a profile that must be strictly positive."""
    out = profile.eval(t)
    if out.value <= 0.0:
        raise NonPositiveProfileError(f"{name} = {out.value!r} at {profile.variable}={t!r}")
    return out


@dataclass(frozen=True)
class WarpedCandidate:
    """
    Candidate gradient Ricci-harmonic soliton on B ×_f F.

    The base metric is φ(ξ)^-2 g_0 and the fiber metric τ(ζ)^-2 g_0'. When τ is
    None the fiber is a generic Einstein manifold with Ric_F = mu * g_F. φ, f
    and h are functions of ξ; u is a function of ξ or ζ according to placement.
    """
    base: SemiEuclideanFactor
    alpha: InvariantDirection
    phi: Profile
    fiber: SemiEuclideanFactor
    f: Profile
    h: Profile
    u: Profile
    beta: Optional[InvariantDirection] = None
    tau: Optional[Profile] = None
    u_placement: Placement = Placement.BASE
    theta: float = 0.0
    lam: float = 0.0
    mu: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.alpha.factor != self.base:
            raise ShapeError("alpha must be a direction of the base factor")
        if self.beta is not None and self.beta.factor != self.fiber:
            raise ShapeError("beta must be a direction of the fiber factor")
        if self.theta < 0.0:
            raise ConstructionError(f"theta must be nonnegative, got {self.theta}")
        if self.tau is not None and self.beta is None:
            raise PlacementError("a fiber conformal factor tau needs a fiber direction beta")
        if self.u_placement is Placement.FIBER:
            if self.beta is None:
                raise PlacementError("u on the fiber needs a fiber direction beta")
            if self.u.variable not in _FIBER_VARIABLES:
                raise PlacementError(f"u is a function of '{self.u.variable}' but lives on the fiber")
        elif self.u.variable not in _BASE_VARIABLES:
            raise PlacementError(f"u is a function of '{self.u.variable}' but lives on the base")

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def m(self) -> int:
        return self.fiber.dim

    @property
    def is_closed_form(self) -> bool:
        profiles = [self.phi, self.f, self.h, self.u]
        if self.tau is not None:
            profiles.append(self.tau)
        return all(p.is_closed_form for p in profiles)

    def split(self, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.n + self.m,):
            raise ShapeError(f"Point has shape {point.shape}, expected ({self.n + self.m},)")
        return point[: self.n], point[self.n:]

    def invariant_coordinates(self, point: Sequence[float]) -> Tuple[float, float]:
        """(ξ, ζ) of a point of the product; ζ is 0 when the fiber has no direction."""
        x, y = self.split(point)
        zeta = self.beta.coordinate(y) if self.beta is not None else 0.0
        return self.alpha.coordinate(x), zeta

    def point_at(self, xi: float, zeta: float = 0.0) -> np.ndarray:
        """A representative point with the given invariant coordinates."""
        a = self.alpha.vector
        x = a * (xi / float(a @ a))
        if self.beta is None:
            return np.concatenate([x, np.zeros(self.m)])
        b = self.beta.vector
        return np.concatenate([x, b * (zeta / float(b @ b))])

    def u_argument(self, xi: float, zeta: float) -> float:
        return zeta if self.u_placement is Placement.FIBER else xi

    def with_changes(self, **changes) -> "WarpedCandidate":
        return replace(self, **changes)
