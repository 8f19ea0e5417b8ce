"""
Parameters of the four steady classification cases.
"""

import logging
import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from core.errors import ConfigError, ConstructionError
from core.factors import InvariantDirection, SemiEuclideanFactor
from core.profiles import Profile

logger = logging.getLogger(__name__)

CASEPARAMS_SCHEMA = "caseparams-v1"

# (||α||², ||β||²) of each case
CASE_NORMS = {1: (0, 0), 2: (0, 1), 3: (1, 0), 4: (1, 1)}


class ZMode(Enum):
    """How the auxiliary function z of Cases 3 and 4 is chosen."""
    CONSTANT = "constant"
    VARIABLE = "variable"


@dataclass(frozen=True)
class CaseParams:
    """
    Inputs of a classified construction.

    c1, c2 fix the conformal fiber of Case 2, c3 is the additive constant of u,
    c4, c5, k, b fix the base of Case 3 and c6, z0 drive the ψ-z system. h1 and
    h2 are the inner and outer integration constants of the potential in Cases
    1 and 2, whose base profiles phi and f default to k·exp(A ξ). tau is the
    free fiber factor of Cases 1 and 3.
    """
    case_id: int
    n: int
    m: int
    theta: float = 1.0
    k: float = 1.0
    A: float = 1.0
    b: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 0.0
    c4: float = 1.0
    c5: float = 1.0
    c6: float = 0.1
    h1: float = 0.0
    h2: float = 0.0
    z_mode: ZMode = ZMode.CONSTANT
    branch: str = "+"
    z0: float = 3.0
    exponents: str = "derived"
    sign: str = "+"
    xi_span: Tuple[float, float] = (-5.0, 5.0)
    zeta_span: Tuple[float, float] = (-5.0, 5.0)
    base_signature: Optional[Tuple[int, ...]] = None
    fiber_signature: Optional[Tuple[int, ...]] = None
    phi: Optional[Profile] = None
    f: Optional[Profile] = None
    tau: Optional[Profile] = None
    quad_tol: float = 1e-12

    def __post_init__(self):
        if self.case_id not in CASE_NORMS:
            raise ConstructionError(f"case_id must be 1..4, got {self.case_id}")
        if self.m < 3:
            raise ConstructionError(f"the classified cases need m >= 3, got m={self.m}")
        if self.n < 1:
            raise ConstructionError(f"n must be >= 1, got {self.n}")
        if not self.theta > 0.0:
            raise ConstructionError(f"theta must be positive, got {self.theta}")
        if self.sign not in ("+", "-"):
            raise ConstructionError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.branch not in ("+", "-"):
            raise ConstructionError(f"branch must be '+' or '-', got {self.branch!r}")
        if self.exponents not in ("derived", "printed"):
            raise ConstructionError(f"exponents must be 'derived' or 'printed', got {self.exponents!r}")
        if self.case_id == 2 and not self.c2 > 0.0:
            raise ConstructionError(f"c2 must be positive, got {self.c2}")
        if self.case_id in (3, 4):
            if not (self.c4 > 0.0 and self.c5 > 0.0):
                raise ConstructionError(f"c4 and c5 must be positive, got {self.c4}, {self.c5}")
            if self.k < 0.0 or (self.z_mode is ZMode.CONSTANT and self.k == 0.0):
                raise ConstructionError(f"k must be positive, got {self.k}")
            if self.c6 < 0.0:
                raise ConstructionError(f"c6 must be nonnegative, got {self.c6}")
        for span in (self.xi_span, self.zeta_span):
            if not span[0] < span[1]:
                raise ConstructionError(f"empty span {span}")

    @property
    def alpha_norm_sq(self) -> int:
        return CASE_NORMS[self.case_id][0]

    @property
    def beta_norm_sq(self) -> int:
        return CASE_NORMS[self.case_id][1]

    @property
    def sign_value(self) -> float:
        return 1.0 if self.sign == "+" else -1.0

    @property
    def radius(self) -> float:
        """√(m + k²(n-1))."""
        return math.sqrt(self.m + self.k * self.k * (self.n - 1))

    @property
    def sign_exponent(self) -> float:
        """a = k / √(m + k²(n-1))."""
        return self.k / self.radius

    def with_changes(self, **changes) -> "CaseParams":
        return replace(self, **changes)

    def base_factor(self) -> SemiEuclideanFactor:
        if self.base_signature is not None:
            return SemiEuclideanFactor.of(self.base_signature)
        return _default_factor(self.n, self.alpha_norm_sq, "base")

    def fiber_factor(self) -> SemiEuclideanFactor:
        if self.fiber_signature is not None:
            return SemiEuclideanFactor.of(self.fiber_signature)
        return _default_factor(self.m, self.beta_norm_sq, "fiber")

    def alpha(self) -> InvariantDirection:
        return _default_direction(self.base_factor(), self.alpha_norm_sq)

    def beta(self) -> InvariantDirection:
        return _default_direction(self.fiber_factor(), self.beta_norm_sq)

    def to_json(self) -> Dict[str, Any]:
        out = {"schema": CASEPARAMS_SCHEMA}
        for fld in fields(self):
            value = getattr(self, fld.name)
            if isinstance(value, Profile):
                value = value.to_json()
            elif isinstance(value, Enum):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[fld.name] = value
        return out

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "CaseParams":
        """Build from a caseparams-v1 document."""
        data = dict(data)
        schema = data.pop("schema", CASEPARAMS_SCHEMA)
        if schema != CASEPARAMS_SCHEMA:
            raise ConfigError(f"Unsupported case parameter schema: {schema}")
        known = {fld.name for fld in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown case parameters: {unknown}")
        try:
            for key in ("phi", "f", "tau"):
                if data.get(key) is not None:
                    data[key] = Profile.from_json(data[key])
            if "z_mode" in data:
                data["z_mode"] = ZMode(data["z_mode"])
            for key in ("xi_span", "zeta_span", "base_signature", "fiber_signature"):
                if data.get(key) is not None:
                    data[key] = tuple(data[key])
            return cls(**data)
        except (TypeError, KeyError, ValueError) as e:
            if isinstance(e, ConstructionError):
                raise
            raise ConfigError(f"Invalid case parameters: {e}")


def _default_factor(dim: int, norm_sq: int, role: str) -> SemiEuclideanFactor:
    if norm_sq == 0:
        if dim < 2:
            raise ConstructionError(f"a null {role} direction needs dimension >= 2, got {dim}")
        return SemiEuclideanFactor.lorentzian(dim)
    return SemiEuclideanFactor.euclidean(dim)


def _default_direction(factor: SemiEuclideanFactor, norm_sq: int) -> InvariantDirection:
    """(1, 1, 0, ...) for a null direction, (1, 0, ...) for a unit one."""
    coefficients = [0.0] * factor.dim
    coefficients[0] = 1.0
    if norm_sq == 0:
        coefficients[1] = 1.0
    direction = InvariantDirection(tuple(coefficients), factor)
    if direction.pseudo_norm_sq != norm_sq:
        raise ConstructionError(
            f"signature {factor.signature} gives ||direction||^2 = {direction.pseudo_norm_sq}, "
            f"expected {norm_sq}"
        )
    return direction
