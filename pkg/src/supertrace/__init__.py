"""Exact computation with bosonic and fermionic matrices: supercommutative
polynomials, graded matrices, the free algebra with trace, super
Cayley-Hamilton identities, symmetric-group counts and q-series indices."""

from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
