"""Exact computations for noncommutative quadric hypersurfaces built from
double Ore extensions: Clifford deformations of quadratic duals, twisted
matrix algebras and twisted direct products, semi-trivial extensions, and
the structure analysis (radical, semisimplicity, blocks) that decides the
isolated-singularity question.
"""

from .exactlin import Scalar, Rational, TensorElement, Subspace

__all__ = ["Scalar", "Rational", "TensorElement", "Subspace"]
__version__ = "0.1.0"
