"""
Constructor package: classified cases, the ψ-z integration and the gallery.

Importing the package registers every gallery entry.
"""

from .cases import (
    construct,
    construct_case1,
    construct_case2,
    construct_case3,
    construct_case3_constant_z,
    construct_case3_variable_z,
    construct_case4,
    harmonic_fiber_map,
    potential_by_quadrature,
    power_law_slope,
)
from .gallery import gallery, gallery_entry, gallery_registry
from .params import CaseParams, ZMode
from .psi_z import PsiZSolution, integrate_psi_z

__all__ = [
    "construct",
    "construct_case1",
    "construct_case2",
    "construct_case3",
    "construct_case3_constant_z",
    "construct_case3_variable_z",
    "construct_case4",
    "harmonic_fiber_map",
    "potential_by_quadrature",
    "power_law_slope",
    "gallery",
    "gallery_entry",
    "gallery_registry",
    "CaseParams",
    "ZMode",
    "PsiZSolution",
    "integrate_psi_z",
]
