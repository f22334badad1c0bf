"""Exact checks for Galois descent of toric and spherical embeddings.

Cones, fans and colored fans over Q with Fraction arithmetic, an exact LP
with Farkas certificates, and the descent criteria built on top of them.
"""

from .colored import ColoredCone, ColoredFan, SphericalDatum
from .cone import Cone, cone_from_generators, cone_from_inequalities, intersect
from .descent import DescentVerdict, check_descent_colored, check_descent_toric
from .fan import Fan, is_complete, is_stable
from .lattice import FiniteMatrixGroup, group_closure, trivial_group
from .lp import LinearSystem, lp_feasible
from .support_lp import is_quasi_projective, is_quasi_projective_colored

__version__ = "0.1.0"

__all__ = [
    "ColoredCone", "ColoredFan", "Cone", "DescentVerdict", "Fan", "FiniteMatrixGroup", "LinearSystem",
    "SphericalDatum", "check_descent_colored", "check_descent_toric", "cone_from_generators",
    "cone_from_inequalities", "group_closure", "intersect", "is_complete", "is_quasi_projective",
    "is_quasi_projective_colored", "is_stable", "lp_feasible", "trivial_group",
]
