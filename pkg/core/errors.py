"""
Exception hierarchy shared by every package.

The CLI turns ConfigError into exit status 2 and any other GrhsError into
exit status 3.
"""


class GrhsError(Exception):
    """Base class for all errors raised by grhs-lab."""


class ShapeError(GrhsError, ValueError):
    """Dimension or length mismatch between factors, directions and points."""


class ProfileDomainError(GrhsError, ValueError):
    """A profile was evaluated outside its domain or produced a non-finite value."""


class NonPositiveProfileError(GrhsError, ValueError):
    """A conformal factor or warping function is not strictly positive."""


class PlacementError(GrhsError):
    """The operation needs the harmonic map on the other factor, or a fiber factor τ."""


class ConstructionError(GrhsError, ValueError):
    """Case parameters are outside the admissible region."""


class IntegrationError(GrhsError):
    """An ODE integration used while constructing profiles did not finish."""


class SingularMetricError(GrhsError):
    """The metric matrix is singular at a finite-difference stencil point."""


class ConfigError(GrhsError, ValueError):
    """Invalid run configuration, case parameters or gallery request."""
