"""Invariant metrizability of canonical Lie-group sprays and planar
geodesic-orbit structures: structure-constant Lie algebras, spray and
projector computations in the left trivialization, an ad-invariant
scalar-product feasibility solver, and the rotation-lift family on the
euclidean plane.  A FastAPI service and a thin CLI expose the same
operations.
"""

__version__ = "0.1.0"

from .algebra import LieAlgebra, catalog, load_algebra  # noqa: F401
from .metrizability import (  # noqa: F401
    Feasibility,
    FeasibilityReport,
    invariant_metrizability,
    invariant_projective_metrizability,
)
