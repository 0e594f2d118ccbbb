"""Certification toolkit for bivariate polynomials with no zeros on the bidisk.

The library certifies structural properties of such polynomials (stability in
the scattering sense, boundary-zero saturation, extremality of the associated
positive-real-part function) and constructs the analytic objects attached to
them: admissible face perturbations, sums-of-squares pairs, and unitary
transfer-function / determinantal representations.
"""

from .scalars import QQi
from .poly import (
    BiPoly,
    UniPoly,
    HomogExpansion,
    DegreeError,
    DomainError,
    reflect,
    evaluate,
    slice_poly,
    shear,
    multiply,
    linear_combine,
    is_symmetric,
    homog_expand,
    vanishing_order,
)

__version__ = "0.1.0"

__all__ = [
    "QQi",
    "BiPoly",
    "UniPoly",
    "HomogExpansion",
    "DegreeError",
    "DomainError",
    "reflect",
    "evaluate",
    "slice_poly",
    "shear",
    "multiply",
    "linear_combine",
    "is_symmetric",
    "homog_expand",
    "vanishing_order",
    "__version__",
]
