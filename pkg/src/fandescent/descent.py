"""Descent criteria: stability plus quasi-projectivity of every orbit fan.

Only orbits of maximal cones are examined.  The orbit fan of a face is a
subfan of the orbit fan of any maximal cone above it, and restricting a
support family to a subfan keeps it a support family, so nothing is lost.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colored import ColoredFan, is_stable_colored, maximal_colored_orbits
from .fan import Fan, FanError, is_stable, maximal_orbits
from .lattice import FiniteMatrixGroup
from .lp import FarkasCertificate
from .support_lp import is_quasi_projective, is_quasi_projective_colored

NOTE = ("has_form answers the existence question only; which forms exist "
        "(a Galois cohomology set) is not computed")


@dataclass(frozen=True)
class OrbitFailure:
    representative: object  # Cone or ColoredCone
    orbit: tuple
    certificate: FarkasCertificate


@dataclass(frozen=True)
class DescentVerdict:
    stable: bool
    stability_witness: tuple | None = None
    failing_orbit: OrbitFailure | None = None
    per_orbit_support: tuple = ()  # ((representative, orbit, SupportFamily), ...)
    note: str = field(default=NOTE, compare=False)

    @property
    def has_form(self) -> bool:
        return self.stable and self.failing_orbit is None


def check_descent_toric(f: Fan, g: FiniteMatrixGroup) -> DescentVerdict:
    if g.rank != f.ambient_rank:
        raise FanError("group rank does not match fan rank")
    if not f.is_valid:
        raise FanError("fan is not valid: " + "; ".join(msg for _, msg in f.report.violations))
    stable, witness = is_stable(f, g)
    if not stable:
        return DescentVerdict(False, witness)
    families = []
    for orb in maximal_orbits(f, g):
        sub = Fan(f.ambient_rank, orb)
        res = is_quasi_projective(sub)
        if not res.holds:
            return DescentVerdict(True, failing_orbit=OrbitFailure(orb[0], sub.maximal_cones, res.certificate))
        families.append((orb[0], sub.maximal_cones, res.family))
    return DescentVerdict(True, per_orbit_support=tuple(families))


def shortcut_toric(f: Fan, g: FiniteMatrixGroup) -> bool | None:
    """True when rank 2 or a group of order at most 2 makes condition (ii) automatic."""
    if f.ambient_rank != 2 and g.order > 2:
        return None
    return True if is_stable(f, g)[0] else None


def check_descent_colored(cf: ColoredFan) -> DescentVerdict:
    if not cf.is_valid:
        raise ValueError("colored fan is not valid: " + "; ".join(cf.report.violations))
    stable, witness = is_stable_colored(cf)
    if not stable:
        return DescentVerdict(False, witness)
    families = []
    for orb in maximal_colored_orbits(cf):
        sub = ColoredFan(cf.datum, orb)
        res = is_quasi_projective_colored(sub)
        if not res.holds:
            return DescentVerdict(True, failing_orbit=OrbitFailure(orb[0], sub.maximal_colored_cones,
                                                                     res.certificate))
        families.append((orb[0], sub.maximal_colored_cones, res.family))
    return DescentVerdict(True, per_orbit_support=tuple(families))


def shortcut_colored(cf: ColoredFan) -> bool | None:
    """True in the situations where stability alone guarantees a form; None otherwise."""
    d = cf.datum
    if not is_stable_colored(cf)[0]:
        return None
    small_group = d.group.order <= 2
    horo = d.is_horospherical()
    plain = cf.has_no_colors()
    if (d.is_split() or d.rank == 1 or (horo and (d.rank == 2 or small_group))
            or (plain and (d.rank == 2 or small_group))):
        return True
    return None
