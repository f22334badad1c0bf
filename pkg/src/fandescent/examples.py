"""Built-in fixtures: the degree-3 toric counterexample and the rank-2 colored one.

Toric data live in N = Z^3 with basis (u, v, w) and the order-3 automorphism
``EPSILON``.  The colored data live in V = Q^2; see the F6 notes for the
coordinates.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from .colored import ColoredCone, ColoredFan, SphericalDatum
from .cone import cone_from_generators, cone_from_inequalities
from .document import colored_document, dumps, fan_document, load_colored, load_fan
from .fan import Fan, orbit
from .lattice import FiniteMatrixGroup, apply, group_closure

EPSILON = ((0, -1, 0), (1, -1, 0), (0, 0, 1))
SWAP = ((0, 1), (1, 0))

SIGMA_RAYS = ((5, 1, -5), (-5, -5, 14), (4, -1, 0))
R1, S1, T1 = (-5, -5, 14), (4, -1, 0), (5, 1, -5)
R, T, W = (0, -5, 28), (1, -4, -10), (0, 0, 1)
MINUS_W = (0, 0, -1)

# maximal cones of the complete fan before and after the extra rays, up to EPSILON
F4_REPRESENTATIVES = (
    ("r1", "t3", "s1"), ("t3", "s1", "t1"), ("r1", "s1", "t1"),
    ("r1", "r2", "t1"), ("r1", "r2", "r3"), ("t1", "t2", "t3"),
)
F5_REPRESENTATIVES = (
    ("r1", "r", "t1"), ("r", "r2", "t1"), ("r1", "r", "w"), ("r", "r2", "w"), ("r1", "s1", "t1"),
    ("r1", "s1", "t3"), ("t3", "s1", "t"), ("t", "t1", "s1"), ("t3", "t", "-w"), ("t", "t1", "-w"),
)
SUBDIVISION_VECTORS = (R, W, T, MINUS_W)

NAMES = ("F1", "F2", "F3", "F4", "F5", "F6", "F6-printed")


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # "fan" or "colored_fan"
    document: dict
    notes: tuple
    known_invalid: bool = False

    def fan(self) -> tuple[Fan, FiniteMatrixGroup]:
        return load_fan(self.document)

    def colored(self) -> ColoredFan:
        return load_colored(self.document)

    def text(self) -> str:
        return dumps(self.document)


def epsilon_group() -> FiniteMatrixGroup:
    return group_closure(3, [EPSILON])


def named_rays() -> dict:
    """r1, s1, t1 and their EPSILON-images r2, r3, ..., plus r, t, w, -w."""
    out = {"r": R, "t": T, "w": W, "-w": MINUS_W}
    for name, v in (("r", R1), ("s", S1), ("t", T1)):
        for k in (1, 2, 3):
            out[f"{name}{k}"] = v
            v = apply(EPSILON, v)
    return out


def sigma():
    return cone_from_generators(3, SIGMA_RAYS)


def _orbit_fan(reps) -> Fan:
    g = epsilon_group()
    rays = named_rays()
    cones = []
    for rep in reps:
        cones += orbit(cone_from_generators(3, [rays[x] for x in rep]), g)
    return Fan(3, cones)


def f3() -> Fan:
    return Fan(3, orbit(sigma(), epsilon_group()))


def f4() -> Fan:
    return _orbit_fan(F4_REPRESENTATIVES)


def f5() -> Fan:
    return _orbit_fan(F5_REPRESENTATIVES)


def f6_datum() -> SphericalDatum:
    return SphericalDatum.build(
        2, cone_from_inequalities(2, [(-1, -1)]), [("D1", (0, 1)), ("D2", (1, 0))],
        [SWAP], [{"D1": "D2", "D2": "D1"}])


def f6(second=(1, -2)) -> ColoredFan:
    d = f6_datum()
    a = ColoredCone(cone_from_generators(2, [(0, 1), second]), frozenset({"D1"}))
    b = ColoredCone(cone_from_generators(2, [(1, 0), (second[1], second[0])]), frozenset({"D2"}))
    return ColoredFan(d, [a, b])


F6_COORDINATES = ("V = Q^2 in the basis dual to (chi1, -chi3): mu2-mu3 = (0,1), mu1-mu2 = (1,0), "
                  "mu1-2mu2+mu3 = (1,-1), mu1-3mu2+2mu3 = (1,-2); the valuation cone {r3 >= r1} "
                  "becomes {x + y <= 0}")


def _build(name: str) -> Fixture:
    g = epsilon_group()
    if name == "F1":
        notes = ("lattice Z^3 with the order-3 automorphism epsilon", "no cones")
        return Fixture(name, "fan", fan_document(Fan(3, []), g, {"name": name, "notes": list(notes)}), notes)
    if name == "F2":
        notes = ("the smooth cone sigma = Cone(5u+v-5w, -5u-5v+14w, 4u-v)",)
        return Fixture(name, "fan", fan_document(Fan(3, [sigma()]), g, {"name": name, "notes": list(notes)}), notes)
    if name == "F3":
        notes = ("orbit fan of sigma under epsilon: sigma, eps(sigma), eps^2(sigma)",
                 "smooth, epsilon-stable, not quasi-projective")
        return Fixture(name, "fan", fan_document(f3(), g, {"name": name, "notes": list(notes)}), notes)
    if name == "F4":
        notes = ("complete simplicial epsilon-stable fan containing the cones of F3",
                 "rays r_i, s_i, t_i with r1=(-5,-5,14), s1=(4,-1,0), t1=(5,1,-5), x_{i+1} = eps(x_i)")
        return Fixture(name, "fan", fan_document(f4(), g, {"name": name, "notes": list(notes)}), notes)
    if name == "F5":
        notes = ("F4 subdivided along the epsilon-orbits of r=(0,-5,28), w=(0,0,1), t=(1,-4,-10) and -w",)
        return Fixture(name, "fan", fan_document(f5(), g, {"name": name, "notes": list(notes)}), notes)
    if name == "F6":
        notes = (F6_COORDINATES,
                 "second generator corrected to (1,-2); with (1,-1) the cone's relative interior misses "
                 "the valuation cone",
                 "valid and swap-stable, not quasi-projective")
        return Fixture(name, "colored_fan", colored_document(f6(), {"name": name, "notes": list(notes)}), notes)
    if name == "F6-printed":
        notes = (F6_COORDINATES,
                 "second generator (1,-1) as printed; known-invalid: the colored cones violate axiom 2")
        doc = colored_document(f6((1, -1)), {"name": name, "notes": list(notes), "known_invalid": True})
        return Fixture(name, "colored_fan", doc, notes, known_invalid=True)
    raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")


_CACHE: dict = {}


def load_example(name: str) -> Fixture:
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]


def export(directory: str | Path) -> list[Path]:
    """Write every fixture as ``<name>.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in NAMES:
        path = directory / f"{name}.json"
        path.write_text(load_example(name).text(), encoding="utf-8")
        out.append(path)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Export the built-in fixtures as JSON documents.")
    parser.add_argument("directory")
    args = parser.parse_args(argv)
    for path in export(args.directory):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
