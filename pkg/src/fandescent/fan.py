"""Fans stored by their maximal cones."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .cone import Cone, cone_from_generators, intersect
from .lattice import FiniteMatrixGroup, apply, determinant, dot


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class FanReport:
    valid: bool
    violations: tuple = ()
    complete: bool = False
    smooth: bool = False
    simplicial: bool = False


class Fan:
    """A finite set of maximal cones; faces are implicit."""

    def __init__(self, ambient_rank: int, cones: Iterable[Cone]):
        cones = list(cones)
        for c in cones:
            if c.ambient_rank != ambient_rank:
                raise FanError(f"cone {c} does not live in rank {ambient_rank}")
        self.ambient_rank = ambient_rank
        self.maximal_cones: tuple[Cone, ...] = tuple(sorted(set(cones), key=lambda c: c.rays))

    @classmethod
    def from_rays(cls, ambient_rank: int, rays: Sequence[Sequence[int]], cones: Iterable[Sequence[int]]) -> "Fan":
        return cls(ambient_rank, [cone_from_generators(ambient_rank, [rays[i] for i in idx]) for idx in cones])

    def __eq__(self, other):
        return isinstance(other, Fan) and (self.ambient_rank, self.maximal_cones) == (other.ambient_rank, other.maximal_cones)

    def __hash__(self):
        return hash((self.ambient_rank, self.maximal_cones))

    def __len__(self):
        return len(self.maximal_cones)

    def __iter__(self):
        return iter(self.maximal_cones)

    def __repr__(self):
        return f"Fan(rank={self.ambient_rank}, {len(self)} maximal cones)"

    @cached_property
    def ray_index(self) -> tuple:
        return tuple(sorted({r for c in self.maximal_cones for r in c.rays}))

    def index_form(self) -> list[tuple[int, ...]]:
        """Maximal cones as sorted lists of indices into :attr:`ray_index`."""
        pos = {r: i for i, r in enumerate(self.ray_index)}
        return sorted(tuple(sorted(pos[r] for r in c.rays)) for c in self.maximal_cones)

    @cached_property
    def report(self) -> FanReport:
        return validate_fan(self.ambient_rank, self.maximal_cones)

    @property
    def is_valid(self) -> bool:
        return self.report.valid

    @cached_property
    def all_cones(self) -> tuple[Cone, ...]:
        out = set()
        for c in self.maximal_cones:
            out.update(c.faces())
        return tuple(sorted(out, key=lambda c: (c.dim, c.rays)))

    def __contains__(self, c: Cone) -> bool:
        return c in self.maximal_cones or any(c in m.faces() for m in self.maximal_cones)

    def contains_point(self, v: Sequence) -> bool:
        return any(c.contains(v) for c in self.maximal_cones)

    @property
    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self.maximal_cones)

    @property
    def is_smooth(self) -> bool:
        return all(c.is_smooth for c in self.maximal_cones)


def validate_fan(ambient_rank: int, cones: Sequence[Cone]) -> FanReport:
    """Check the fan axioms on a list of would-be maximal cones."""
    cones = list(cones)
    violations = []
    for i, c in enumerate(cones):
        if c.ambient_rank != ambient_rank:
            violations.append(((i, i), "wrong ambient rank"))
        elif not c.is_strictly_convex:
            violations.append(((i, i), "cone is not strictly convex"))
    if violations:
        return FanReport(False, tuple(violations))
    if len(cones) >= 48 and _certified_complete(ambient_rank, cones):
        return FanReport(True, (), True, all(c.is_smooth for c in cones), True)
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            a, b = cones[i], cones[j]
            if a == b:
                violations.append(((i, j), "duplicate cone"))
                continue
            meet = intersect(a, b)
            if meet == a or meet == b:
                violations.append(((i, j), "one maximal cone contains the other"))
            elif not (meet.is_face_of(a) and meet.is_face_of(b)):
                violations.append(((i, j), f"intersection {meet} is not a face of both"))
    valid = not violations
    simplicial = all(c.is_simplicial for c in cones)
    smooth = simplicial and all(c.is_smooth for c in cones)
    complete = valid and _walls_closed(ambient_rank, cones)
    return FanReport(valid, tuple(violations), complete, smooth, simplicial)


def _certified_complete(ambient_rank: int, cones: Sequence[Cone]) -> bool:
    """Cheap proof that full-dimensional simplicial cones form a complete fan.

    If every wall lies in exactly two cones, on opposite sides of it, the cones
    cover the sphere like a covering map of some degree; one point found in a
    single cone and in no other shows the degree is 1, which rules out any
    overlap.  False means "not shown", never "invalid".
    """
    if ambient_rank < 2 or any(c.dim != ambient_rank or not c.is_simplicial for c in cones):
        return False
    walls: dict = {}
    for c in cones:
        for i in range(ambient_rank):
            walls.setdefault(c.rays[:i] + c.rays[i + 1:], []).append(c.rays[i])
    for wall, apexes in walls.items():
        if len(apexes) != 2:
            return False
        h = _wall_normal(ambient_rank, wall)
        if dot(h, apexes[0]) * dot(h, apexes[1]) >= 0:
            return False
    for c in cones[:8]:
        p = c.barycenter()
        if sum(1 for d in cones if d.contains(p)) == 1:
            return True
    return False


def _wall_normal(n: int, rays: Sequence[Sequence[int]]) -> tuple:
    """A nonzero vector orthogonal to ``n - 1`` independent vectors (cofactor expansion)."""
    out = []
    for k in range(n):
        minor = [[r[j] for j in range(n) if j != k] for r in rays]
        out.append((-1) ** k * determinant(tuple(tuple(row) for row in minor)))
    return tuple(out)


def _wall_counts(pieces: Sequence[Cone]) -> Counter:
    counts: Counter = Counter()
    for c in pieces:
        for f in c.facets():
            counts[f] += 1
    return counts


def _walls_closed(ambient_rank: int, cones: Sequence[Cone]) -> bool:
    if not cones or any(c.dim != ambient_rank for c in cones):
        return False
    return all(k == 2 for k in _wall_counts(cones).values())


def uncovered_walls(f: Fan) -> list[tuple[Cone, Cone]]:
    """Walls (codimension-one faces) lying in exactly one maximal cone, with that cone."""
    counts = _wall_counts(f.maximal_cones)
    return [(w, c) for c in f.maximal_cones for w in c.facets() if counts[w] == 1]


def is_complete(f: Fan) -> bool:
    """Support equals Q^n.

    All maximal cones must be full-dimensional and every wall must be shared by
    exactly two of them; otherwise the boundary of the support contains a
    codimension-one piece.
    """
    return _walls_closed(f.ambient_rank, f.maximal_cones)


def covers(region: Cone, pieces: Sequence[Cone]) -> bool:
    """Whether cones of dimension dim(region) inside ``region`` cover it.

    ``pieces`` must come from one valid fan.  Same wall criterion as
    :func:`is_complete`, relative to the region: a wall may be single only if
    it lies in the boundary of the region.
    """
    pieces = [p for p in pieces if p.dim == region.dim and region.contains_cone(p)]
    if not pieces:
        return region.is_zero
    for w, k in _wall_counts(pieces).items():
        if k == 2:
            continue
        if k != 1:
            return False
        if not any(all(dot(h, g) == 0 for g in w.generators()) for h in region.inequalities):
            return False
    return True


def is_stable(f: Fan, g: FiniteMatrixGroup, use_all_elements: bool = False):
    """Whether every group element permutes the maximal cones.

    Returns ``(True, None)`` or ``(False, (matrix, cone))`` for the first
    offending pair.  Checking generators suffices; ``use_all_elements`` is there
    for cross-checks.
    """
    if g.rank != f.ambient_rank:
        raise FanError("group rank does not match fan rank")
    keys = {c._key() for c in f.maximal_cones}
    mats = g.elements if use_all_elements else g.generators
    n = f.ambient_rank
    for m in mats:
        for c in f.maximal_cones:
            if c.is_strictly_convex:
                # unimodular images of primitive extremal rays stay primitive and extremal
                key = (n, tuple(sorted(apply(m, r) for r in c.rays)), ())
            else:
                key = c.image(m)._key()
            if key not in keys:
                return False, (m, c)
    return True, None


def orbit(c: Cone, g: FiniteMatrixGroup) -> list[Cone]:
    """Distinct images of ``c``, in group element order."""
    out: list[Cone] = []
    for m in g.elements:
        d = c.image(m)
        if d not in out:
            out.append(d)
    return out


def orbit_subfan(f: Fan, c: Cone, g: FiniteMatrixGroup) -> Fan:
    if c not in f:
        raise FanError(f"{c} is not a cone of the fan")
    sub = Fan(f.ambient_rank, orbit(c, g))
    if not sub.is_valid:
        raise FanError("orbit subfan is not a fan; is the fan stable?")
    return sub


def maximal_orbits(f: Fan, g: FiniteMatrixGroup) -> list[list[Cone]]:
    """Orbits of maximal cones, each starting at its least representative."""
    seen: set = set()
    out = []
    for c in f.maximal_cones:
        if c in seen:
            continue
        orb = orbit(c, g)
        seen.update(orb)
        out.append(orb)
    return out


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every cone of ``fine`` lies in a cone of ``coarse`` and the supports agree."""
    for c in fine.maximal_cones:
        if not any(d.contains_cone(c) for d in coarse.maximal_cones):
            return False
    return all(covers(d, fine.maximal_cones) for d in coarse.maximal_cones)


def replace_cones(f: Fan, remove: Iterable[Cone], add: Iterable[Cone]) -> Fan:
    drop = set(remove)
    return Fan(f.ambient_rank, [c for c in f.maximal_cones if c not in drop] + list(add))
