"""Exact computations with filtered cochain complexes and their spectral sequences."""

from .linalg import Field, Q, GF, Subspace, FlagNotIncreasing
from .fcomplex import FilteredComplex, FilteredMorphism

__all__ = ["Field", "Q", "GF", "Subspace", "FlagNotIncreasing",
           "FilteredComplex", "FilteredMorphism"]
__version__ = "0.1.0"
