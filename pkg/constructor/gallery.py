"""
Named example candidates.

Entries register themselves with the gallery registry; overrides are checked
against each entry's signature before the call.
"""

import logging
import math
from typing import Any, Dict, List, Optional

from core.errors import ConfigError, ConstructionError
from core.factors import InvariantDirection, Placement, SemiEuclideanFactor, WarpedCandidate
from core.profiles import Profile, exp, log, sqrt
from utils.registry import Registry
from .cases import construct_case3_constant_z
from .params import CaseParams

logger = logging.getLogger(__name__)

gallery_registry = Registry("gallery")


def gallery_entry(
    name: Optional[str] = None,
    description: Optional[str] = None,
    aliases: Optional[List[str]] = None,
):
    """Decorator to register a gallery entry."""
    def decorator(func):
        return gallery_registry.register(func, name, description, aliases)
    return decorator


def null_direction(dim: int) -> InvariantDirection:
    """(1, 1, 0, ...) on a Lorentzian factor."""
    factor = SemiEuclideanFactor.lorentzian(dim)
    return InvariantDirection((1.0, 1.0) + (0.0,) * (dim - 2), factor)


def unit_direction(dim: int) -> InvariantDirection:
    """(1, 0, ...) on a Euclidean factor."""
    factor = SemiEuclideanFactor.euclidean(dim)
    return InvariantDirection((1.0,) + (0.0,) * (dim - 1), factor)


@gallery_entry(
    name="1.5",
    description="Steady soliton over a null base direction with u on the base",
    aliases=["null-base"],
)
def example_null_base(
    k: float = 1.0,
    n: int = 3,
    m: int = 2,
    theta: float = 1.0,
    k1: float = 1.0,
    k2: float = 0.0,
) -> WarpedCandidate:
    """f = φ = e^(kξ), u = kξ, h = (k/2)(2-n+3m+θ)ξ - k1 e^(-2kξ)/(2k) + k2."""
    if k == 0.0:
        raise ConstructionError("k must be non-zero")
    alpha = null_direction(n)
    xi = Profile.identity("xi")
    warp = exp(k * xi)
    h = 0.5 * k * (2 - n + 3 * m + theta) * xi - (k1 / (2 * k)) * exp(-2 * k * xi) + k2
    return WarpedCandidate(
        base=alpha.factor,
        alpha=alpha,
        phi=warp,
        fiber=SemiEuclideanFactor.euclidean(m),
        f=warp,
        h=h,
        u=k * xi,
        u_placement=Placement.BASE,
        theta=theta,
        label="1.5",
    )


@gallery_entry(
    name="1.8",
    description="Steady soliton over null base and fiber directions with u on the fiber",
    aliases=["null-fiber"],
)
def example_null_fiber(
    n: int = 3,
    m: int = 3,
    A: float = 1.0,
    k: float = 1.0,
    theta: float = 1.0,
    c7: float = 0.0,
    c8: float = 0.0,
    c9: float = 0.0,
    variant: str = "printed",
) -> WarpedCandidate:
    """
    φ = f = k e^(Aξ), τ = ζ² + 1, u = -√(2(m-2)/θ) asinh ζ + c9.

    The printed potential has linear coefficient (2-n+3m+θ)A/2 and leaves a
    constant θA² in the first base equation; variant "theta-free" drops θ.
    """
    if variant not in ("printed", "theta-free"):
        raise ConfigError(f"Unknown variant for 1.8: {variant}")
    if A == 0.0 or not k > 0.0 or m < 3:
        raise ConstructionError(f"1.8 needs A != 0, k > 0 and m >= 3 (A={A}, k={k}, m={m})")
    alpha, beta = null_direction(n), null_direction(m)
    xi, zeta = Profile.identity("xi"), Profile.identity("zeta")
    warp = k * exp(A * xi)
    slope = 2 - n + 3 * m + (theta if variant == "printed" else 0.0)
    h = 0.5 * slope * A * xi - (c7 / (2 * A * k * k)) * exp(-2 * A * xi) + c8
    asinh = log(zeta + sqrt(zeta ** 2 + 1.0))
    u = c9 - math.sqrt(2 * (m - 2) / theta) * asinh
    return WarpedCandidate(
        base=alpha.factor,
        alpha=alpha,
        phi=warp,
        fiber=beta.factor,
        beta=beta,
        tau=zeta ** 2 + 1.0,
        f=warp,
        h=h,
        u=u,
        u_placement=Placement.FIBER,
        theta=theta,
        label=f"1.8-{variant}",
    )


@gallery_entry(
    name="1.9",
    description="Steady soliton over a unit base direction with exponential warp",
    aliases=["unit-base"],
)
def example_unit_base(
    k: float = 2.0,
    n: int = 1,
    m: int = 1,
    theta: float = 1.0,
) -> WarpedCandidate:
    """
    f = e^(sξ), φ = f^k, h = (m - k(n-2)) log f, u = kξ with s² = θk²/(-k²(n-2) - m).

    The denominator must be positive, which holds for n = 1 and k² > m.
    """
    denominator = -k * k * (n - 2) - m
    if not denominator > 0.0:
        raise ConstructionError(
            f"1.9 needs -k^2(n-2) - m > 0, got {denominator} (n={n}, m={m}, k={k})"
        )
    rate = math.sqrt(theta * k * k / denominator)
    alpha = unit_direction(n)
    xi = Profile.identity("xi")
    f = exp(rate * xi)
    return WarpedCandidate(
        base=alpha.factor,
        alpha=alpha,
        phi=exp(k * rate * xi),
        fiber=SemiEuclideanFactor.euclidean(m),
        f=f,
        h=(m - k * (n - 2)) * rate * xi,
        u=k * xi,
        u_placement=Placement.BASE,
        theta=theta,
        label="1.9",
    )


@gallery_entry(
    name="1.10",
    description="Power-law base with constant z on a Lorentzian fiber",
    aliases=["power-law"],
)
def example_power_law(
    b: float = 1.0,
    c4: float = 1.0,
    c5: float = 1.0,
    theta: float = 1.0,
) -> WarpedCandidate:
    """φ = c5/(ξ+b), f = c4/(ξ+b), h = -4 log(ξ+b), τ = e^(c4 ζ), u = c4 ζ/√θ (n=2, k=1, m=3)."""
    params = CaseParams(
        case_id=3,
        n=2,
        m=3,
        k=1.0,
        b=b,
        c4=c5,
        c5=c4,
        theta=theta,
        branch="+",
        tau=exp(c4 * Profile.identity("zeta")),
    )
    return construct_case3_constant_z(params).with_changes(label="1.10")


@gallery_entry(
    name="flat",
    description="Trivial flat product with constant profiles",
    aliases=["trivial"],
)
def example_flat(n: int = 2, m: int = 2, theta: float = 1.0, u0: float = 0.0) -> WarpedCandidate:
    alpha = unit_direction(n)
    one = Profile.constant(1.0, "xi")
    return WarpedCandidate(
        base=alpha.factor,
        alpha=alpha,
        phi=one,
        fiber=SemiEuclideanFactor.euclidean(m),
        f=one,
        h=Profile.constant(0.0, "xi"),
        u=Profile.constant(u0, "xi"),
        theta=theta,
        label="flat",
    )


@gallery_entry(
    name="singular-warp",
    description="Warping function 1/(1-ξ) on ξ < 1, an incomplete control",
    aliases=["singular"],
)
def example_singular_warp(n: int = 2, m: int = 2) -> WarpedCandidate:
    alpha = unit_direction(n)
    xi = Profile.identity("xi")
    f = ((1.0 - xi) ** -1).on(-math.inf, 1.0)
    return WarpedCandidate(
        base=alpha.factor,
        alpha=alpha,
        phi=Profile.constant(1.0, "xi"),
        fiber=SemiEuclideanFactor.euclidean(m),
        f=f,
        h=Profile.constant(0.0, "xi"),
        u=Profile.constant(0.0, "xi"),
        label="singular-warp",
    )


def gallery(example_id: str, overrides: Optional[Dict[str, Any]] = None) -> WarpedCandidate:
    """
    Build a gallery candidate.

    Args:
        example_id: entry name or alias
        overrides: keyword overrides, validated against the entry signature

    Returns:
        WarpedCandidate
    """
    name = gallery_registry.resolve(example_id)
    logger.info(f"Building gallery entry {name} with overrides {overrides or {}}")
    return gallery_registry.call(name, overrides)
