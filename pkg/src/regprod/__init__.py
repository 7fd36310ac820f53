"""Zeta-regularized products of shifted sequences.

Closed-form evaluation of regularized products prod_k (lambda_k - z_1) ...
(lambda_k - z_n) for regularizable sequences, the exact multiplicative-anomaly
discrepancy between a product of sequences and the product of their
regularizations, and an independent numerical analytic-continuation oracle
used to cross-validate every closed form.  Instantiated providers: shifted
naturals, Barnes multi-dimensional lattices, Riemann xi zeros, and Bessel
function zeros.
"""

from .precision import Precision, DEFAULT_PRECISION
from .errors import (
    RegprodError,
    DomainError,
    ConvergenceError,
    ConsistencyError,
)

__all__ = [
    "Precision",
    "DEFAULT_PRECISION",
    "RegprodError",
    "DomainError",
    "ConvergenceError",
    "ConsistencyError",
]

__version__ = "0.1.0"
