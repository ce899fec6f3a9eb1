"""Special functions behind the closed-form sum-rate."""

from ._elementary import bessel_k, bessel_k_scaled, gauss_2f1, gauss_2f1_complement
from ._mellin import (
    BivariateFoxHSpec,
    ContourSpec,
    FoxHSpec,
    bivariate_fox_h,
    fox_h,
    meijer_g,
)

__all__ = [
    "BivariateFoxHSpec",
    "ContourSpec",
    "FoxHSpec",
    "bessel_k",
    "bessel_k_scaled",
    "bivariate_fox_h",
    "fox_h",
    "gauss_2f1",
    "gauss_2f1_complement",
    "meijer_g",
]
