"""Exact local algebra for map germs (C^n, 0) -> (C^{n+1}, 0).

The package computes image equations, the module M(f), A_e-codimensions by
three independent routes, stable unfoldings and a Cohen-Macaulay test that
decides whether dim M(f) equals the image Milnor number.
"""
from .errors import (GermValidationError, MondcertError, NotGenericallyOneToOne,
                     ResourceLimitExceeded)
from .germ import MapGerm, Unfolding
from .poly import Poly, Ring, parse_poly

__version__ = "0.1.0"

__all__ = [
    "GermValidationError",
    "MapGerm",
    "MondcertError",
    "NotGenericallyOneToOne",
    "Poly",
    "ResourceLimitExceeded",
    "Ring",
    "Unfolding",
    "parse_poly",
    "__version__",
]
