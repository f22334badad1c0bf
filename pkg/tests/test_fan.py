import math
import random

import pytest

from fandescent.cone import cone_from_generators, intersect
from fandescent.examples import EPSILON, epsilon_group, f3, f4, f5, named_rays, sigma
from fandescent.fan import (
    Fan,
    FanError,
    covers,
    is_complete,
    is_stable,
    orbit_subfan,
    refines,
    validate_fan,
)
from fandescent.lattice import primitive_part, trivial_group
from fandescent.subdivide import stellar_subdivide
from oracles import cross, orthant_fan, random_fan2, random_point, random_rays2, valid_2d


def _sample_outside(f: Fan, rng, tries=2000):
    """Point-location oracle: a random rational point no maximal cone contains."""
    for _ in range(tries):
        p = random_point(rng, f.ambient_rank)
        if any(p) and not any(c.contains(p) for c in f.maximal_cones):
            return p
    return None


def test_sigma_orbit_is_valid():
    rep = validate_fan(3, list(f3().maximal_cones))
    assert rep.valid and rep.smooth and not rep.complete


def test_overlapping_quadrants_invalid():
    cones = [cone_from_generators(2, [(1, 0), (0, 1)]), cone_from_generators(2, [(1, 1), (1, -1)])]
    rep = validate_fan(2, cones)
    assert not rep.valid and rep.violations
    assert not valid_2d(cones)


def test_single_cone_valid():
    assert validate_fan(3, [sigma()]).valid


def test_contained_cone_is_invalid():
    q = cone_from_generators(2, [(1, 0), (0, 1)])
    assert not validate_fan(2, [q, cone_from_generators(2, [(1, 0)])]).valid


def test_validity_against_sector_oracle():
    rng = random.Random(12)
    seen = {True: 0, False: 0}
    for _ in range(300):
        rays = random_rays2(rng, 6)
        cones = []
        for _ in range(rng.randint(1, 4)):
            u, v = rng.sample(rays, 2)
            cones.append(cone_from_generators(2, [u, v] if cross(u, v) else [u]))
        f = Fan(2, cones)
        expect = valid_2d(f.maximal_cones)
        assert f.is_valid == expect
        seen[expect] += 1
    assert seen[True] > 30 and seen[False] > 30


def test_random_fans_are_valid():
    rng = random.Random(1)
    for _ in range(50):
        assert random_fan2(rng).is_valid


def test_completeness():
    rng = random.Random(0)
    assert is_complete(orthant_fan(2)) and is_complete(orthant_fan(3))
    assert not is_complete(f3())
    assert _sample_outside(f3(), rng) is not None
    assert is_complete(f4())
    assert _sample_outside(f4(), rng) is None


def test_completeness_random_2d_agrees_with_sampling():
    rng = random.Random(30)
    for _ in range(60):
        f = random_fan2(rng)
        if is_complete(f):
            assert _sample_outside(f, rng, 300) is None
        else:
            # an incomplete 2D fan misses an open sector, which sampling finds
            assert _sample_outside(f, rng, 5000) is not None


def test_stability():
    g = epsilon_group()
    assert is_stable(f3(), g)[0]
    s = sigma()
    broken = Fan(3, [s, s.image(EPSILON)])
    ok, witness = is_stable(broken, g)
    assert not ok
    m, c = witness
    assert c.image(m) not in broken.maximal_cones
    assert is_stable(broken, trivial_group(3))[0]


def test_orbit_subfans():
    g = epsilon_group()
    assert orbit_subfan(f3(), sigma(), g) == f3()
    rays = named_rays()
    c = cone_from_generators(3, [rays["r1"], rays["r2"], rays["r3"]])
    assert orbit_subfan(f4(), c, g) == Fan(3, [c])
    w = cone_from_generators(3, [(0, 0, 1)])
    assert len(orbit_subfan(Fan(3, [w]), w, g)) == 1


def test_refines():
    assert refines(f4(), f4())
    assert refines(f5(), f4())
    assert not refines(f4(), f5())


def test_covers():
    q = cone_from_generators(2, [(1, 0), (0, 1)])
    halves = [cone_from_generators(2, [(1, 0), (1, 1)]), cone_from_generators(2, [(1, 1), (0, 1)])]
    assert covers(q, halves)
    assert not covers(q, halves[:1])


def test_fan_rank_mismatch():
    with pytest.raises(FanError):
        Fan(2, [sigma()])


def test_index_form_round_trip():
    f = f4()
    g = Fan.from_rays(3, f.ray_index, f.index_form())
    assert g == f



def _pairwise_valid(cones) -> bool:
    for i, a in enumerate(cones):
        for b in cones[i + 1:]:
            meet = intersect(a, b)
            if meet in (a, b) or not (meet.is_face_of(a) and meet.is_face_of(b)):
                return False
    return True


def _ring(rays):
    return [cone_from_generators(2, [rays[i], rays[(i + 1) % len(rays)]]) for i in range(len(rays))]


def test_large_complete_fans_match_pairwise():
    rng = random.Random(61)
    ring = _ring(random_rays2(rng, 60))
    assert validate_fan(2, ring).valid and _pairwise_valid(ring) and valid_2d(ring)
    f = orthant_fan(3)
    while len(f) < 60:
        v = tuple(rng.randint(-4, 4) for _ in range(3))
        if any(v):
            f = stellar_subdivide(f, primitive_part(v))
    cones = list(f.maximal_cones)
    assert validate_fan(3, cones).valid and _pairwise_valid(cones) and is_complete(f)


def test_double_wrap_is_rejected():
    # every ray lies between two cones on opposite sides, yet the circle is covered twice
    rays = [primitive_part((round(1000 * math.cos(4 * math.pi * k / 49)),
                            round(1000 * math.sin(4 * math.pi * k / 49)))) for k in range(49)]
    cones = _ring(rays)
    assert len(set(cones)) == 49
    assert not validate_fan(2, cones).valid and not _pairwise_valid(cones)


def test_large_overlapping_union_is_rejected():
    f = f5()
    for v in ((1, 1, 1), (-1, 2, 3), (2, -1, -1), (-3, -1, 1), (1, 2, -4), (0, 1, 1), (1, 0, 2), (-1, -1, -2), (3, 1, 1), (-2, 3, -1)):
        f = stellar_subdivide(f, v)
    extra = cone_from_generators(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(f) >= 48 and extra not in f.maximal_cones
    assert not validate_fan(3, list(f.maximal_cones) + [extra]).valid
