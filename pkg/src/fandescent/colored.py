"""Colored cones and colored fans over a spherical datum.

The datum is the combinatorial shadow of a spherical homogeneous space: the
vector space V = Q^rank, the valuation cone inside it, the colors with their
images rho(D) in V, and a finite group acting on V and permuting the colors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .cone import Cone, cone_from_generators
from .fan import Fan
from .lattice import FiniteMatrixGroup, Matrix, apply, as_vector, group_closure, identity, integral_primitive, matmul
from .lp import LinearSystem, lp_feasible


class DatumError(ValueError):
    pass


class UnknownColor(KeyError):
    pass


def relative_interiors_meet(cones: Sequence[Cone], inside: Cone | None = None):
    """Exact test whether the relative interiors of ``cones`` share a point of ``inside``.

    Strict facet inequalities are normalised to ``>= 1``, which is harmless
    because every constraint is homogeneous.  Returns a witness point or None.
    """
    n = cones[0].ambient_rank if cones else inside.ambient_rank
    eqs, ineqs = [], []
    for c in cones:
        eqs += [(e, 0) for e in c.equations]
        ineqs += [(h, 1) for h in c.inequalities]
    if inside is not None:
        eqs += [(e, 0) for e in inside.equations]
        ineqs += [(h, 0) for h in inside.inequalities]
    res = lp_feasible(LinearSystem.build(n, eqs, ineqs))
    return res.solution if res.feasible else None


@dataclass(frozen=True)
class SphericalDatum:
    rank: int
    valuation_cone: Cone
    colors: tuple  # ((name, rho), ...) with rho a lattice vector
    group: FiniteMatrixGroup
    color_action: Mapping = field(repr=False, hash=False, compare=False)

    @classmethod
    def build(cls, rank: int, valuation_cone: Cone, colors: Iterable[tuple[str, Sequence[int]]],
              generators: Sequence = (), generator_permutations: Sequence[Mapping[str, str]] = (),
              check: bool = True) -> "SphericalDatum":
        cols = tuple((str(name), as_vector(rho)) for name, rho in colors)
        names = [c[0] for c in cols]
        if len(set(names)) != len(names):
            raise DatumError("duplicate color names")
        gens = [tuple(tuple(r) for r in g) for g in generators]
        perms = [dict(p) for p in generator_permutations] if generator_permutations else [
            {x: x for x in names} for _ in gens]
        if len(perms) != len(gens):
            raise DatumError("one color permutation per group generator is required")
        for p in perms:
            if sorted(p) != sorted(names) or sorted(p.values()) != sorted(names):
                raise DatumError("color action is not a permutation of the colors")
        group = group_closure(rank, gens)
        action = _extend_action(rank, group, gens, perms, names)
        datum = cls(rank, valuation_cone, cols, group, action)
        if check:
            datum.check()
        return datum

    @cached_property
    def rho(self) -> dict:
        return dict(self.colors)

    @property
    def color_names(self) -> tuple:
        return tuple(c[0] for c in self.colors)

    def permute(self, m: Matrix, names: Iterable[str]) -> frozenset:
        perm = self.color_action[m]
        return frozenset(perm[x] for x in names)

    def check(self) -> None:
        if self.valuation_cone.ambient_rank != self.rank:
            raise DatumError("valuation cone has the wrong rank")
        if self.valuation_cone.dim != self.rank:
            raise DatumError("valuation cone must have nonempty interior")
        for name, rho in self.colors:
            if len(rho) != self.rank:
                raise DatumError(f"rho({name}) has the wrong length")
        for m in self.group.elements:
            if self.valuation_cone.image(m) != self.valuation_cone:
                raise DatumError("group does not preserve the valuation cone")
            perm = self.color_action[m]
            for name, rho in self.colors:
                if self.rho[perm[name]] != apply(m, rho):
                    raise DatumError(f"rho is not equivariant at color {name}")

    def is_horospherical(self) -> bool:
        return len(self.valuation_cone.lineality_basis) == self.rank

    def is_split(self) -> bool:
        return self.group.is_trivial


def _extend_action(rank, group, gens, perms, names) -> dict:
    """Color permutations for every group element; fails if not a homomorphism."""
    ident = identity(rank)
    action = {ident: {x: x for x in names}}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g, p in zip(gens, perms):
                gh = matmul(g, h)
                composed = {x: p[action[h][x]] for x in names}
                if gh in action:
                    if action[gh] != composed:
                        raise DatumError("color action is not a group homomorphism")
                else:
                    action[gh] = composed
                    nxt.append(gh)
        frontier = nxt
    assert set(action) == set(group.elements)
    return action


@dataclass(frozen=True)
class ColoredCone:
    cone: Cone
    colors: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "colors", frozenset(self.colors))

    def sort_key(self):
        return (self.cone.rays, tuple(sorted(self.colors)))

    def image(self, datum: SphericalDatum, m: Matrix) -> "ColoredCone":
        return ColoredCone(self.cone.image(m), datum.permute(m, self.colors))

    def __repr__(self):
        return f"ColoredCone({self.cone!r}, {{{', '.join(sorted(self.colors))}}})"


def colored_cone(rank: int, gens: Iterable[Sequence[int]], colors: Iterable[str] = ()) -> ColoredCone:
    return ColoredCone(cone_from_generators(rank, gens), frozenset(colors))


@dataclass(frozen=True)
class Report:
    valid: bool
    violations: tuple = ()

    def __bool__(self):
        return self.valid


def _check_names(d: SphericalDatum, cc: ColoredCone):
    for name in cc.colors:
        if name not in d.rho:
            raise UnknownColor(name)


def validate_colored_cone(d: SphericalDatum, cc: ColoredCone) -> Report:
    _check_names(d, cc)
    c = cc.cone
    v = []
    if c.ambient_rank != d.rank:
        return Report(False, ("cone lives in the wrong rank",))
    if not c.is_strictly_convex:
        v.append("cone is not strictly convex")
    for name in sorted(cc.colors):
        rho = d.rho[name]
        if not any(rho):
            v.append(f"0 in rho(F): rho({name}) = 0")
        elif not c.contains(rho):
            v.append(f"rho({name}) is not in the cone")
    if c.is_strictly_convex:
        color_rays = {integral_primitive(d.rho[x]) for x in cc.colors if any(d.rho[x])}
        for r in c.rays:
            if r not in color_rays and not d.valuation_cone.contains(r):
                v.append(f"ray {r} is neither a color image nor in the valuation cone (axiom 1)")
        if relative_interiors_meet([c], d.valuation_cone) is None:
            v.append("relative interior misses the valuation cone (axiom 2)")
    return Report(not v, tuple(v))


def supported_faces(d: SphericalDatum, cc: ColoredCone) -> list[ColoredCone]:
    """Faces whose relative interior meets the valuation cone, with their colors."""
    out = []
    for f in cc.cone.faces():
        if f.is_zero or relative_interiors_meet([f], d.valuation_cone) is not None:
            cols = frozenset(x for x in cc.colors if f.contains(d.rho[x]))
            out.append(ColoredCone(f, cols))
    return sorted(out, key=ColoredCone.sort_key)


class ColoredFan:
    def __init__(self, datum: SphericalDatum, cones: Iterable[ColoredCone]):
        self.datum = datum
        self.maximal_colored_cones: tuple[ColoredCone, ...] = tuple(
            sorted(set(cones), key=ColoredCone.sort_key))

    def __eq__(self, other):
        return isinstance(other, ColoredFan) and self.datum == other.datum and \
            self.maximal_colored_cones == other.maximal_colored_cones

    def __hash__(self):
        return hash(self.maximal_colored_cones)

    def __len__(self):
        return len(self.maximal_colored_cones)

    def __iter__(self):
        return iter(self.maximal_colored_cones)

    def __repr__(self):
        return f"ColoredFan({list(self.maximal_colored_cones)})"

    @cached_property
    def all_colored_cones(self) -> tuple[ColoredCone, ...]:
        seen = set()
        for cc in self.maximal_colored_cones:
            seen.update(supported_faces(self.datum, cc))
        return tuple(sorted(seen, key=lambda c: (c.cone.dim,) + c.sort_key()))

    @cached_property
    def report(self) -> Report:
        return validate_colored_fan(self)

    @property
    def is_valid(self) -> bool:
        return self.report.valid

    def underlying_fan(self) -> Fan:
        return Fan(self.datum.rank, [cc.cone for cc in self.maximal_colored_cones])

    def has_no_colors(self) -> bool:
        return all(not cc.colors for cc in self.maximal_colored_cones)


def validate_colored_fan(cf: ColoredFan) -> Report:
    v = []
    for i, cc in enumerate(cf.maximal_colored_cones):
        rep = validate_colored_cone(cf.datum, cc)
        v += [f"colored cone {i}: {msg}" for msg in rep.violations]
    if v:
        return Report(False, tuple(v))
    stored = cf.all_colored_cones
    for i in range(len(stored)):
        for j in range(i + 1, len(stored)):
            w = relative_interiors_meet([stored[i].cone, stored[j].cone], cf.datum.valuation_cone)
            if w is not None:
                v.append(f"{stored[i]} and {stored[j]} share the valuation point {tuple(str(x) for x in w)} "
                         "in their relative interiors")
    return Report(not v, tuple(v))


def is_stable_colored(cf: ColoredFan, use_all_elements: bool = False):
    d = cf.datum
    present = set(cf.maximal_colored_cones)
    mats = d.group.elements if use_all_elements else d.group.generators
    for m in mats:
        for cc in cf.maximal_colored_cones:
            if cc.image(d, m) not in present:
                return False, (m, cc)
    return True, None


def colored_orbit(cf: ColoredFan, cc: ColoredCone) -> list[ColoredCone]:
    out: list[ColoredCone] = []
    for m in cf.datum.group.elements:
        img = cc.image(cf.datum, m)
        if img not in out:
            out.append(img)
    return out


def maximal_colored_orbits(cf: ColoredFan) -> list[list[ColoredCone]]:
    seen: set = set()
    out = []
    for cc in cf.maximal_colored_cones:
        if cc in seen:
            continue
        orb = colored_orbit(cf, cc)
        seen.update(orb)
        out.append(orb)
    return out


def is_horospherical(d: SphericalDatum) -> bool:
    return bool(d.is_horospherical())


def rank(d: SphericalDatum) -> int:
    return d.rank


def has_no_colors(cf: ColoredFan) -> bool:
    return cf.has_no_colors()


def is_split(d: SphericalDatum) -> bool:
    return d.is_split()
