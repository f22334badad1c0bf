"""Quasi-projectivity as linear feasibility.

A fan is quasi-projective when it carries one linear form per maximal cone,
the forms agreeing on pairwise intersections and each form strictly beating
every other one on the interior of its own cone.  Strictness is normalised to
``>= 1`` at the ray-sum barycenter, which is harmless since every constraint
is homogeneous.  Colored fans use the same scheme restricted to the valuation
cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .colored import ColoredCone, ColoredFan, SphericalDatum
from .cone import Cone, intersect, whole_space
from .fan import Fan
from .lattice import dot, trivial_group
from .lp import FarkasCertificate, LinearSystem, lp_feasible, verify_farkas


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class SupportFamily:
    """One linear form per maximal cone, in the cone order of the fan."""

    forms: tuple

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(tuple(Fraction(x) for x in l) for l in self.forms))

    def scaled(self, factor) -> "SupportFamily":
        return SupportFamily(tuple(tuple(factor * x for x in l) for l in self.forms))


@dataclass(frozen=True)
class QPResult:
    holds: bool
    system: LinearSystem
    family: SupportFamily | None = None
    certificate: FarkasCertificate | None = None

    def __bool__(self):
        return self.holds


# -- encoding ----------------------------------------------------------------


def _row(n: int, blocks: int, i: int, j: int, g: Sequence) -> tuple:
    row = [0] * (n * blocks)
    for k, x in enumerate(g):
        row[i * n + k] += x
        row[j * n + k] -= x
    return tuple(row)


def _encode(n: int, cones: Sequence[Cone], positive_rays, strict_points) -> LinearSystem:
    """Shared encoder: ``positive_rays[i]`` get ``>= 0``, ``strict_points[i]`` get ``>= 1``."""
    m = len(cones)
    eqs, ineqs = [], []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for g in intersect(cones[i], cones[j]).rays:
                eqs.append((_row(n, m, i, j, g), 0))
            for g in positive_rays[i]:
                ineqs.append((_row(n, m, i, j, g), 0))
            for b in strict_points[i]:
                ineqs.append((_row(n, m, i, j, b), 1))
    return LinearSystem.build(n * m, eqs, ineqs)


def encode_fan_qp(f: Fan) -> LinearSystem:
    cones = f.maximal_cones
    return _encode(f.ambient_rank, cones, [c.rays for c in cones], [[c.barycenter()] for c in cones])


def _family_from_solution(n: int, m: int, x: Sequence) -> SupportFamily:
    return SupportFamily(tuple(tuple(x[i * n:(i + 1) * n]) for i in range(m)))


def _solve(n: int, m: int, system: LinearSystem) -> QPResult:
    res = lp_feasible(system)
    if res.feasible:
        return QPResult(True, system, family=_family_from_solution(n, m, res.solution))
    return QPResult(False, system, certificate=res.certificate)


def is_quasi_projective(f: Fan) -> QPResult:
    """Decide quasi-projectivity; the witness is re-checked before it is returned."""
    system = encode_fan_qp(f)
    out = _solve(f.ambient_rank, len(f), system)
    if out.holds and not verify_support_family(f, out.family):
        raise AssertionError("solver produced a support family that does not verify")
    if not out.holds and not verify_farkas(system, out.certificate):
        raise AssertionError("solver produced a certificate that does not verify")
    return out


def verify_support_family(f: Fan, family: SupportFamily) -> bool:
    """Check the defining conditions directly, with strict positivity at barycenters."""
    cones = f.maximal_cones
    if len(family.forms) != len(cones) or any(len(l) != f.ambient_rank for l in family.forms):
        return False
    for i, a in enumerate(cones):
        for j, b in enumerate(cones):
            if i == j:
                continue
            diff = [x - y for x, y in zip(family.forms[i], family.forms[j])]
            if any(dot(diff, g) != 0 for g in intersect(a, b).rays):
                return False
            if any(dot(diff, g) < 0 for g in a.rays):
                return False
            if dot(diff, a.barycenter()) <= 0:
                return False
    return True


# -- cyclic difference certificates ---------------------------------------------


@dataclass(frozen=True)
class CyclicDifferenceCertificate:
    """A vector v with points p_i in cone c_i and q_i in c_{i+1} such that p_i - q_i = v.

    Summing (l_i - l_{i+1})(v) around the cycle telescopes to zero, while each
    term is a nonnegative quantity made positive by strictness.
    """

    v: tuple
    cycle: tuple  # ((cone index, p, q), ...)

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(Fraction(x) for x in self.v))
        object.__setattr__(self, "cycle", tuple(
            (int(i), tuple(Fraction(x) for x in p), tuple(Fraction(x) for x in q)) for i, p, q in self.cycle))


def verify_cyclic_certificate(f: Fan, cert: CyclicDifferenceCertificate) -> bool:
    cones = f.maximal_cones
    n = f.ambient_rank
    k = len(cert.cycle)
    if len(cert.v) != n:
        raise CertificateError("vector v has the wrong length")
    for idx, p, q in cert.cycle:
        if not 0 <= idx < len(cones):
            raise CertificateError(f"cone index {idx} out of range")
        if len(p) != n or len(q) != n:
            raise CertificateError("cycle point has the wrong length")
    if k < 2:
        return False
    for pos, (idx, p, q) in enumerate(cert.cycle):
        nxt = cones[cert.cycle[(pos + 1) % k][0]]
        if tuple(x - y for x, y in zip(p, q)) != cert.v:
            return False
        if not cones[idx].contains(p) or not nxt.contains(q):
            return False
        if nxt.contains(p):
            return False
    return True


# -- colored fans ------------------------------------------------------------------


def _relevant_points(cone: Cone, valuation: Cone) -> tuple[tuple, list]:
    """Rays of cone ∩ valuation, and barycenters of its faces landing in Int(cone)."""
    meet = intersect(cone, valuation)
    points = []
    for face in meet.faces():
        b = face.barycenter()
        if cone.contains(b, mode="relative_interior") and (any(b) or cone.is_zero):
            points.append(b)
    return meet.rays, points


def encode_colored_qp(cf: ColoredFan) -> LinearSystem:
    d = cf.datum
    cones = [cc.cone for cc in cf.maximal_colored_cones]
    rays, points = [], []
    for c in cones:
        r, p = _relevant_points(c, d.valuation_cone)
        rays.append(r)
        points.append(p)
    return _encode(d.rank, cones, rays, points)


def verify_colored_support_family(cf: ColoredFan, family: SupportFamily) -> bool:
    d = cf.datum
    cones = [cc.cone for cc in cf.maximal_colored_cones]
    if len(family.forms) != len(cones) or any(len(l) != d.rank for l in family.forms):
        return False
    for i, a in enumerate(cones):
        rays, points = _relevant_points(a, d.valuation_cone)
        for j, b in enumerate(cones):
            if i == j:
                continue
            diff = [x - y for x, y in zip(family.forms[i], family.forms[j])]
            if any(dot(diff, g) != 0 for g in intersect(a, b).rays):
                return False
            if any(dot(diff, g) < 0 for g in rays):
                return False
            if any(dot(diff, b_) <= 0 for b_ in points):
                return False
    return True


def is_quasi_projective_colored(cf: ColoredFan) -> QPResult:
    if not cf.is_valid:
        raise ValueError("colored fan is not valid: " + "; ".join(cf.report.violations))
    system = encode_colored_qp(cf)
    out = _solve(cf.datum.rank, len(cf), system)
    if out.holds and not verify_colored_support_family(cf, out.family):
        raise AssertionError("solver produced a support family that does not verify")
    if not out.holds and not verify_farkas(system, out.certificate):
        raise AssertionError("solver produced a certificate that does not verify")
    return out


def colored_fan_from_fan(f: Fan) -> ColoredFan:
    """The colorless colored fan over the horospherical datum 𝒱 = V with no colors."""
    group = trivial_group(f.ambient_rank)
    datum = SphericalDatum(f.ambient_rank, whole_space(f.ambient_rank), (), group, {m: {} for m in group.elements})
    return ColoredFan(datum, [ColoredCone(c) for c in f.maximal_cones])
