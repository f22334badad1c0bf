"""Stellar subdivision, equivariant subdivision and equivariant smoothing."""

from __future__ import annotations

import heapq
import logging
from operator import mul
from typing import Sequence

from .cone import Cone, _intern, cone_from_generators
from .fan import Fan, is_stable, maximal_orbits
from .lattice import FiniteMatrixGroup, apply, as_vector, determinant, primitive_part

log = logging.getLogger(__name__)


class SubdivisionError(ValueError):
    pass


def _star_cones(c: Cone, r: tuple) -> list[Cone]:
    """Cones Cone(r, F) over the facets F of ``c`` not containing ``r``."""
    out = []
    for f in c.facets():
        if not f.contains(r):
            out.append(cone_from_generators(c.ambient_rank, list(f.rays) + [r]))
    return out


def stellar_subdivide(f: Fan, r: Sequence[int]) -> Fan:
    """Stellar subdivision of ``f`` at the primitive vector ``r``."""
    r = as_vector(r)
    if len(r) != f.ambient_rank:
        raise SubdivisionError("vector has the wrong length")
    if not any(r) or primitive_part(r) != r:
        raise SubdivisionError(f"{r} is not a primitive lattice vector")
    hit = [c for c in f.maximal_cones if c.contains(r)]
    if not hit:
        raise SubdivisionError(f"{r} is not in the support of the fan")
    keep = [c for c in f.maximal_cones if c not in hit]
    new = list(keep)
    for c in hit:
        if r in c.rays:
            new.append(c)
        else:
            new.extend(_star_cones(c, r))
    return Fan(f.ambient_rank, new)


def equivariant_stellar(f: Fan, g: FiniteMatrixGroup, r: Sequence[int], check: bool = True) -> Fan:
    """Stellar subdivisions at every point of the orbit of ``r``, in group order."""
    out = f
    for p in g.orbit(as_vector(r)):
        out = stellar_subdivide(out, p)
    if check:
        ok, witness = is_stable(out, g)
        if not ok:
            raise SubdivisionError(f"equivariant subdivision lost stability at {witness}")
    return out


def triangulate_equivariant(f: Fan, g: FiniteMatrixGroup) -> Fan:
    """A simplicial, g-stable refinement with the same rays.

    Every cone is triangulated by pulling its rays in the fan's sorted ray
    order, so shared faces are cut the same way from both sides and the pieces
    glue.  Some symmetric cones (a square cone under a quarter turn) have no
    stable triangulation without new rays; SubdivisionError is raised then.
    """
    if f.is_simplicial:
        return f
    order = {r: i for i, r in enumerate(f.ray_index)}
    cones: list[Cone] = []
    for orb in maximal_orbits(f, g):
        for c in orb:
            cones.extend(_pull_in_order(c, order))
    out = Fan(f.ambient_rank, cones)
    if not out.is_valid or not is_stable(out, g)[0]:
        raise SubdivisionError("triangulation did not produce a stable fan")
    return out


def _pull_in_order(c: Cone, order: dict) -> list[Cone]:
    if c.is_simplicial:
        return [c]
    apex = min(c.rays, key=lambda r: order.get(r, len(order)))
    out = []
    for facet in c.facets():
        if apex in facet.rays:
            continue
        for piece in _pull_in_order(facet, order):
            out.append(cone_from_generators(c.ambient_rank, list(piece.rays) + [apex]))
    return out


def smoothing_point(c: Cone) -> tuple:
    """Primitive lattice point of the fundamental parallelepiped used to split ``c``."""
    pts = [(coeffs, p) for coeffs, p in c.parallelepiped_points() if any(coeffs)]
    if not pts:
        raise SubdivisionError("cone is already smooth")
    return primitive_part(pts[0][1])


def smooth_equivariant(f: Fan, g: FiniteMatrixGroup, max_steps: int = 10_000) -> Fan:
    """Equivariantly subdivide until every cone is smooth.

    Each step takes the lexicographically least cone of maximal multiplicity and
    subdivides along the orbit of its least nonzero parallelepiped point.
    Fans of full-dimensional simplicial cones go through an integer-only loop
    with incremental bookkeeping; anything else uses the generic operations.
    """
    if not f.is_simplicial:
        raise SubdivisionError("smooth_equivariant needs a simplicial fan; triangulate first")
    ok, _ = is_stable(f, g)
    if not ok:
        raise SubdivisionError("fan is not stable under the group")
    if f.maximal_cones and all(c.dim == f.ambient_rank for c in f.maximal_cones):
        out = _SimplicialLoop(f, g).run(max_steps)
        ok, witness = is_stable(out, g)
        if not ok:
            raise SubdivisionError(f"smoothing lost stability at {witness}")
        return out
    out = f
    for step in range(max_steps):
        singular = [c for c in out.maximal_cones if c.multiplicity > 1]
        if not singular:
            return out
        worst = max(c.multiplicity for c in singular)
        target = min((c for c in singular if c.multiplicity == worst), key=lambda c: c.rays)
        p = smoothing_point(target)
        log.debug("step %d: multiplicity %d cone %s split at %s", step, worst, target, p)
        out = equivariant_stellar(out, g, p)
    raise SubdivisionError("smoothing did not terminate within max_steps")


def _int_det(rows) -> int:
    if len(rows) == 1:
        return rows[0][0]
    if len(rows) == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if len(rows) == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return int(determinant(tuple(tuple(r) for r in rows)))


class _SimplicialLoop:
    """Smoothing on full-dimensional simplicial fans, with cones as sorted ray tuples.

    For a cone with rays g_0..g_{n-1}, normals[i] is the integral normal of the
    facet opposite g_i, oriented so that normals[i].g_i > 0.  A point lies in
    the cone iff all normals pair nonnegatively with it, and the rays with a
    positive pairing span the face containing it in its relative interior.
    """

    def __init__(self, f: Fan, g: FiniteMatrixGroup):
        self.n = f.ambient_rank
        self.gens = g.generators
        self.group = g
        self.data: dict = {}
        self.by_ray: dict = {}
        self.heap: list = []
        for c in f.maximal_cones:
            self._add(c.rays)

    def _normals(self, key):
        n = self.n
        out = []
        for i in range(n):
            others = [key[j] for j in range(n) if j != i]
            h = tuple((-1) ** k * _int_det([[r[c] for c in range(n) if c != k] for r in others]) for k in range(n))
            if sum(map(mul, h, key[i])) < 0:
                h = tuple(-x for x in h)
            out.append(h)
        return out

    def _add(self, key):
        mult = abs(_int_det(key))
        self.data[key] = (mult, self._normals(key))
        for r in key:
            self.by_ray.setdefault(r, set()).add(key)
        if mult > 1:
            heapq.heappush(self.heap, (-mult, key))

    def _remove(self, key):
        del self.data[key]
        for r in key:
            self.by_ray[r].discard(key)

    def _pairings(self, key, q):
        return [sum(map(mul, h, q)) for h in self.data[key][1]]

    def _subdivide(self, q, seed, children):
        """Stellar subdivision at q, given a cone of the step-start fan containing q."""
        if self.by_ray.get(q):
            return
        key = seed
        while key not in self.data:
            key = next(k for k in children[key] if min(self._pairings_any(k, q)) >= 0)
        face = [r for r, v in zip(key, self._pairings(key, q)) if v > 0]
        hit = set.intersection(*(self.by_ray[r] for r in face))
        for d in sorted(hit):
            vals = self._pairings(d, q)
            self._remove(d)
            kids = []
            for i, v in enumerate(vals):
                if v > 0:
                    new = tuple(sorted(d[:i] + (q,) + d[i + 1:]))
                    self._add(new)
                    kids.append(new)
            children[d] = kids

    def _pairings_any(self, key, q):
        return [sum(map(mul, h, q)) for h in self._normals(key)]

    def _image(self, m, key):
        return tuple(sorted(apply(m, r) for r in key))

    def run(self, max_steps: int) -> Fan:
        for step in range(max_steps):
            while self.heap and self.heap[0][1] not in self.data:
                heapq.heappop(self.heap)
            if not self.heap:
                return self.fan()
            neg, target = self.heap[0]
            cone = _intern(Cone(self.n, target, ()))
            p = smoothing_point(cone)
            log.debug("step %d: multiplicity %d cone %s split at %s", step, -neg, cone, p)
            before = set(self.data)
            children: dict = {}
            for m in self.group.elements:
                q = apply(m, p)
                self._subdivide(q, self._image(m, target), children)
            self._check_stable(before)
        raise SubdivisionError("smoothing did not terminate within max_steps")

    def _check_stable(self, before):
        removed = before - self.data.keys()
        added = self.data.keys() - before
        for m in self.gens:
            for key in removed:
                if self._image(m, key) not in removed:
                    raise SubdivisionError(f"equivariant subdivision lost stability at {key}")
            for key in added:
                if self._image(m, key) not in self.data:
                    raise SubdivisionError(f"equivariant subdivision lost stability at {key}")

    def fan(self) -> Fan:
        cones = []
        for key, (mult, _) in self.data.items():
            c = _intern(Cone(self.n, key, ()))
            c.__dict__.setdefault("multiplicity", mult)
            cones.append(c)
        return Fan(self.n, cones)
