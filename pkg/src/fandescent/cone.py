"""Rational polyhedral cones with both descriptions kept in canonical form.

A cone is stored by its lineality space and its extremal rays taken modulo
the lineality space (projected orthogonally onto its complement), each ray a
primitive integral vector.  Two cones are equal iff these data are equal, so
``==`` and ``hash`` are cheap.  Facet inequalities are computed alongside by
the double description method.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from operator import mul
from typing import Iterable, Sequence

from .lattice import (
    Matrix,
    Vector,
    apply,
    as_vector,
    determinant,
    dot,
    integral_primitive,
    is_unimodular,
    kernel_basis,
    orthogonal_project,
    smith_normal_form,
    span_basis,
)
from .lp import LinearSystem, lp_feasible


class ConeError(ValueError):
    pass


def _scale(v: Sequence) -> Vector:
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    return integral_primitive(v)


def double_description(dim: int, inequalities: Sequence[Sequence]) -> tuple[list[Vector], list[Vector]]:
    """Generators of ``{x in Q^dim : a.x >= 0 for every row a}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extremal rays modulo it.  Rays are adjoined incrementally; a pair of rays
    on opposite sides of a new hyperplane is combined only if it is adjacent
    (combinatorial test on tight-constraint sets).
    """
    lin: list[Vector] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[Vector] = []
    tight: list[frozenset] = []
    for k, a in enumerate(inequalities):
        a = integral_primitive(a) if any(a) else tuple(a)
        if all(x == 0 for x in a):
            continue
        pivot = next((l for l in lin if dot(a, l) != 0), None)
        if pivot is not None:
            ap = dot(a, pivot)
            if ap < 0:
                pivot, ap = tuple(-x for x in pivot), -ap
            new_lin = []
            for l in lin:
                if l == pivot or l == tuple(-x for x in pivot):
                    continue
                c = dot(a, l)
                new_lin.append(_scale(tuple(ap * x - c * y for x, y in zip(l, pivot))))
            new_rays = []
            new_tight = []
            for r, z in zip(rays, tight):
                c = dot(a, r)
                new_rays.append(_scale(tuple(ap * x - c * y for x, y in zip(r, pivot))))
                new_tight.append(z | {k})
            new_rays.append(pivot)
            new_tight.append(frozenset(range(k)))
            lin = [l for l in new_lin if any(l)]
            rays, tight = new_rays, new_tight
            continue
        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        new_tight = [tight[i] for i in pos] + [tight[i] | {k} for i in zero]
        for p in pos:
            for q in neg:
                common = tight[p] & tight[q]
                if any(common <= tight[o] for o in range(len(rays)) if o != p and o != q):
                    continue
                comb = tuple(vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p]))
                if any(comb):
                    new_rays.append(_scale(comb))
                    new_tight.append(common | {k})
        rays, tight = new_rays, new_tight
    return lin, rays


class Cone:
    """A rational polyhedral cone in Q^n given in canonical form."""

    __slots__ = ("ambient_rank", "rays", "lineality_basis", "__dict__")

    def __init__(self, ambient_rank: int, rays: Iterable, lineality_basis: Iterable = ()):
        # canonical data only; use the constructors below
        self.ambient_rank = ambient_rank
        self.rays = tuple(rays)
        self.lineality_basis = tuple(lineality_basis)

    def _key(self):
        return (self.ambient_rank, self.rays, self.lineality_basis)

    def __eq__(self, other):
        return isinstance(other, Cone) and self._key() == other._key()

    def __lt__(self, other):
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.lineality_basis:
            return f"Cone(rays={list(self.rays)}, lineality={list(self.lineality_basis)})"
        return f"Cone({', '.join(str(r) for r in self.rays)})"

    # -- derived data ---------------------------------------------------

    @cached_property
    def span_basis(self) -> tuple[Vector, ...]:
        return span_basis(list(self.rays) + list(self.lineality_basis))

    @cached_property
    def dim(self) -> int:
        return len(self.span_basis)

    @cached_property
    def equations(self) -> tuple[Vector, ...]:
        """Basis of the orthogonal complement of the span."""
        if len(self.span_basis) == self.ambient_rank:
            return ()
        if not self.span_basis:
            return tuple(tuple(int(i == j) for j in range(self.ambient_rank)) for i in range(self.ambient_rank))
        return kernel_basis(self.span_basis, self.ambient_rank)

    @cached_property
    def inequalities(self) -> tuple[Vector, ...]:
        """Facet normals, projected into the span and made primitive."""
        gens = list(self.rays) + list(self.lineality_basis) + [tuple(-x for x in l) for l in self.lineality_basis]
        _, normals = double_description(self.ambient_rank, gens)
        out = set()
        full = self.dim == self.ambient_rank
        for h in normals:
            p = h if full else orthogonal_project(h, self.span_basis)
            if any(p):
                out.add(integral_primitive(p))
        return tuple(sorted(out))

    @property
    def is_strictly_convex(self) -> bool:
        return not self.lineality_basis

    @property
    def is_simplicial(self) -> bool:
        return self.is_strictly_convex and len(self.rays) == self.dim

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lineality_basis

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    def generators(self) -> list[Vector]:
        return list(self.rays) + list(self.lineality_basis) + [tuple(-x for x in l) for l in self.lineality_basis]

    def barycenter(self) -> Vector:
        """Sum of the primitive rays; lies in the relative interior."""
        if not self.is_strictly_convex:
            raise ConeError("barycenter is only defined for strictly convex cones")
        return tuple(sum(r[i] for r in self.rays) for i in range(self.ambient_rank))

    # -- predicates -------------------------------------------------------

    def in_span(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.equations)

    def contains(self, v: Sequence, mode: str = "closed") -> bool:
        if len(v) != self.ambient_rank:
            raise ConeError("dimension mismatch")
        for e in self.equations:
            if sum(map(mul, e, v)):
                return False
        if mode == "closed":
            return all(sum(map(mul, h, v)) >= 0 for h in self.inequalities)
        if mode == "relative_interior":
            return all(sum(map(mul, h, v)) > 0 for h in self.inequalities)
        raise ValueError(f"unknown mode {mode!r}")

    def contains_by_generators(self, v: Sequence) -> bool:
        """Membership decided as LP feasibility of a nonnegative combination."""
        gens = self.generators()
        n = len(gens)
        eqs = [(tuple(g[i] for g in gens), v[i]) for i in range(self.ambient_rank)]
        ineqs = [(tuple(int(j == k) for k in range(n)), 0) for j in range(n)]
        return lp_feasible(LinearSystem.build(n, eqs, ineqs)).feasible

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators())

    # -- faces --------------------------------------------------------------

    @cached_property
    def _faces(self) -> tuple["Cone", ...]:
        if not self.lineality_basis and len(self.rays) == self.dim:
            # simplicial: every subset of rays spans a face
            n = self.ambient_rank
            subsets = [()]
            for r in self.rays:
                subsets += [s + (r,) for s in subsets]
            return tuple(sorted((_intern(Cone(n, s, ())) for s in subsets), key=lambda c: (c.dim, c.rays)))
        found = {self}
        stack = [self]
        while stack:
            c = stack.pop()
            for h in c.inequalities:
                f = cone_from_generators(self.ambient_rank, [r for r in c.rays if dot(h, r) == 0])
                if f not in found:
                    found.add(f)
                    stack.append(f)
        return tuple(sorted(found, key=lambda c: (c.dim, c.rays)))

    def faces(self) -> tuple["Cone", ...]:
        if not self.is_strictly_convex:
            raise ConeError("faces requested for a cone that is not strictly convex")
        return self._faces

    def facets(self) -> list["Cone"]:
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face_of(self, other: "Cone") -> bool:
        return other.is_strictly_convex and self in other.faces()

    # -- lattice invariants ---------------------------------------------------

    @cached_property
    def multiplicity(self) -> int:
        if not self.is_simplicial:
            raise ConeError("multiplicity requires a simplicial cone")
        if self.is_zero:
            return 1
        diag, _, _ = smith_normal_form(self.rays)
        out = 1
        for d in diag:
            out *= d
        return out

    @property
    def is_smooth(self) -> bool:
        return self.is_simplicial and self.multiplicity == 1

    def parallelepiped_points(self) -> list[tuple[tuple[Fraction, ...], Vector]]:
        """Lattice points ``sum c_i g_i`` with ``0 <= c_i < 1`` over the rays.

        Returns ``(coefficients, point)`` pairs, one per element of the group
        (span lattice)/(ray lattice), sorted by coefficient tuple.
        """
        if not self.is_simplicial:
            raise ConeError("parallelepiped points require a simplicial cone")
        if self.is_zero:
            return [((), tuple(0 for _ in range(self.ambient_rank)))]
        d = self.dim
        diag, left, _ = smith_normal_form(self.rays)
        diag = diag[:d]
        top = diag[-1]
        # c_i = frac(sum_j k_j * left[j][i] / d_j), all over the common denominator top
        weights = [[left[j][i] * (top // diag[j]) for i in range(d)] for j in range(d)]
        nums = [(0,) * d]
        for j in range(d):
            if diag[j] == 1:
                continue
            w = weights[j]
            nums = [tuple((x + k * wi) % top for x, wi in zip(base, w)) for base in nums for k in range(diag[j])]
        out = []
        for num in nums:
            c = tuple(Fraction(x, top) for x in num)
            point = tuple(sum(x * g[t] for x, g in zip(num, self.rays)) // top for t in range(self.ambient_rank))
            out.append((c, point))
        out.sort()
        return out

    # -- constructions ----------------------------------------------------------

    def image(self, m: Matrix) -> "Cone":
        if len(m) != self.ambient_rank or not is_unimodular(m):
            raise ConeError("image requires a unimodular matrix of the ambient rank")
        if self.is_strictly_convex:
            # unimodular maps send primitive extremal rays to primitive extremal rays
            return _intern(Cone(self.ambient_rank, sorted(apply(m, r) for r in self.rays), ()))
        return cone_from_generators(self.ambient_rank, [apply(m, g) for g in self.generators()])

    def intersect(self, other: "Cone") -> "Cone":
        return intersect(self, other)

    def dual(self) -> "Cone":
        return dual_cone(self)


_INTERNED: dict = {}


def _intern(c: Cone) -> Cone:
    """One shared object per canonical cone, so cached data is computed once."""
    return _INTERNED.setdefault(c._key(), c)


def _canonical(ambient_rank: int, lin: Iterable[Sequence], rays: Iterable[Sequence]) -> Cone:
    lin_basis = span_basis(list(lin)) if lin else ()
    out = set()
    for r in rays:
        p = tuple(Fraction(x) for x in r)
        if lin_basis:
            proj = orthogonal_project(p, lin_basis)
            p = tuple(x - y for x, y in zip(p, proj))
        if any(p):
            out.add(integral_primitive(p))
    return _intern(Cone(ambient_rank, sorted(out), lin_basis))


@lru_cache(maxsize=200_000)
def _from_generators(ambient_rank: int, gens: tuple) -> Cone:
    if not gens:
        return _intern(Cone(ambient_rank, (), ()))
    # extremal rays of a cone = rays of the H-cone cut out by its facets
    dual_lin, normals = double_description(ambient_rank, gens)
    eqs = list(dual_lin)
    ineqs = list(normals) + eqs + [tuple(-x for x in e) for e in eqs]
    lin, rays = double_description(ambient_rank, ineqs)
    return _canonical(ambient_rank, lin, rays)


def cone_from_generators(ambient_rank: int, gens: Iterable[Sequence]) -> Cone:
    """The cone of nonnegative combinations of ``gens``."""
    vecs = []
    for g in gens:
        g = as_vector(g)
        if len(g) != ambient_rank:
            raise ConeError(f"generator {g} has length {len(g)}, expected {ambient_rank}")
        if any(g):
            vecs.append(integral_primitive(g))
    return _from_generators(ambient_rank, tuple(sorted(set(vecs))))


def cone_from_inequalities(ambient_rank: int, inequalities: Iterable[Sequence], equations: Iterable[Sequence] = ()) -> Cone:
    """The cone ``{x : h.x >= 0, e.x = 0}``."""
    ineqs = [as_vector(h) for h in inequalities]
    eqs = [as_vector(e) for e in equations]
    rows = ineqs + eqs + [tuple(-x for x in e) for e in eqs]
    for r in rows:
        if len(r) != ambient_rank:
            raise ConeError("inequality of wrong length")
    lin, rays = double_description(ambient_rank, [integral_primitive(r) if any(r) else r for r in rows])
    return _canonical(ambient_rank, lin, rays)


@lru_cache(maxsize=200_000)
def intersect(a: Cone, b: Cone) -> Cone:
    if a.ambient_rank != b.ambient_rank:
        raise ConeError("ambient ranks differ")
    return cone_from_inequalities(a.ambient_rank, a.inequalities + b.inequalities, a.equations + b.equations)


def dual_cone(c: Cone) -> Cone:
    """The dual cone, in the same coordinates (V* identified with Q^n)."""
    gens = list(c.inequalities) + list(c.equations) + [tuple(-x for x in e) for e in c.equations]
    return cone_from_generators(c.ambient_rank, gens)


def zero_cone(ambient_rank: int) -> Cone:
    return _intern(Cone(ambient_rank, (), ()))


def whole_space(ambient_rank: int) -> Cone:
    return cone_from_generators(ambient_rank, [tuple(s * int(i == j) for j in range(ambient_rank))
                                               for i in range(ambient_rank) for s in (1, -1)])


def simplicial_determinant(rays: Sequence[Sequence[int]]) -> int:
    return abs(determinant(tuple(tuple(r) for r in rays)))
