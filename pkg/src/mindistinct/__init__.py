"""Bounds and machine-verified certificates for q(G), the minimum number of
distinct eigenvalues over symmetric matrices with the off-diagonal pattern of G."""
from ._kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
