"""
Geodesics of warped-product candidates: right-hand sides, integration and the
completeness probe.
"""

from .flow import (
    SYSTEMS,
    GeodesicState,
    conserved_quantity,
    energy,
    fiber_invariant,
    flat_factor_rhs,
    geodesic_rhs,
    metric_with_partials,
    split_form_rhs,
    warp_acceleration,
)
from .integrate import (
    GeodesicTrajectory,
    IntegratorSettings,
    Termination,
    TerminationKind,
    exponential_warp_closed_form,
    integrate_geodesic,
    reversed_return,
)
from .probe import PROBE_SCHEMA, SAMPLERS, ProbeSummary, completeness_probe, initial_states

__all__ = [
    "SYSTEMS",
    "GeodesicState",
    "conserved_quantity",
    "energy",
    "fiber_invariant",
    "flat_factor_rhs",
    "geodesic_rhs",
    "metric_with_partials",
    "split_form_rhs",
    "warp_acceleration",
    "GeodesicTrajectory",
    "IntegratorSettings",
    "Termination",
    "TerminationKind",
    "exponential_warp_closed_form",
    "integrate_geodesic",
    "reversed_return",
    "PROBE_SCHEMA",
    "SAMPLERS",
    "ProbeSummary",
    "completeness_probe",
    "initial_states",
]
