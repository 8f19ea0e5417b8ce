"""
Core types: exceptions, semi-Euclidean factors, invariant directions,
warped-product candidates and exactly differentiable profiles.
"""

from .errors import (
    ConfigError,
    ConstructionError,
    GrhsError,
    IntegrationError,
    NonPositiveProfileError,
    PlacementError,
    ProfileDomainError,
    ShapeError,
    SingularMetricError,
)
from .factors import (
    InvariantDirection,
    Placement,
    SemiEuclideanFactor,
    WarpedCandidate,
    positive_jet,
    pseudo_norm_sq,
)
from .profiles import Jet, Profile, antiderivative, exp, jet_profile, log, sqrt

__all__ = [
    "ConfigError",
    "ConstructionError",
    "GrhsError",
    "IntegrationError",
    "NonPositiveProfileError",
    "PlacementError",
    "ProfileDomainError",
    "ShapeError",
    "SingularMetricError",
    "InvariantDirection",
    "Placement",
    "SemiEuclideanFactor",
    "WarpedCandidate",
    "positive_jet",
    "pseudo_norm_sq",
    "Jet",
    "Profile",
    "antiderivative",
    "exp",
    "jet_profile",
    "log",
    "sqrt",
]
