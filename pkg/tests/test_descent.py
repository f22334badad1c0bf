import random

import pytest

from fandescent.colored import ColoredFan, SphericalDatum, colored_cone
from fandescent.descent import check_descent_colored, check_descent_toric, shortcut_colored, shortcut_toric
from fandescent.cone import cone_from_generators, whole_space
from fandescent.examples import EPSILON, epsilon_group, f3, f6, f6_datum, load_example, sigma
from fandescent.fan import Fan, FanError
from fandescent.lattice import trivial_group
from fandescent.lp import verify_farkas
from fandescent.support_lp import encode_fan_qp
from oracles import datum_menu, random_colored_fan, random_stable_fan


def test_sigma_orbit_has_no_form():
    v = check_descent_toric(f3(), epsilon_group())
    assert v.stable and not v.has_form
    fo = v.failing_orbit
    assert set(fo.orbit) == set(f3().maximal_cones)
    assert verify_farkas(encode_fan_qp(Fan(3, fo.orbit)), fo.certificate)
    assert "not computed" in v.note


def test_trivial_group_has_form():
    v = check_descent_toric(f3(), trivial_group(3))
    assert v.has_form and len(v.per_orbit_support) == 3


def test_unstable_fan_reports_witness():
    v = check_descent_toric(Fan(3, [sigma()]), epsilon_group())
    assert not v.stable and not v.has_form
    assert v.stability_witness[1] == sigma()


def test_order_two_groups_always_have_forms():
    rng = random.Random(77)
    for _ in range(40):
        f, g = random_stable_fan(rng, small_only=True)
        assert g.order <= 2
        assert check_descent_toric(f, g).has_form
        assert shortcut_toric(f, g) is True


def test_input_errors():
    with pytest.raises(FanError):
        check_descent_toric(f3(), trivial_group(2))
    bad = Fan(2, [cone_from_generators(2, [(1, 0), (0, 1)]), cone_from_generators(2, [(1, 1), (1, -1)])])
    with pytest.raises(FanError):
        check_descent_toric(bad, trivial_group(2))


def test_shortcut_toric():
    rng = random.Random(5)
    for _ in range(20):
        f, g = random_stable_fan(rng)
        if f.ambient_rank == 2:
            assert shortcut_toric(f, g) is True
    assert shortcut_toric(f3(), epsilon_group()) is None
    s = sigma()
    assert shortcut_toric(Fan(3, [s, s.image(EPSILON)]), epsilon_group()) is None


def test_f6_has_no_form():
    v = check_descent_colored(f6())
    assert v.stable and not v.has_form and v.failing_orbit is not None
    assert len(v.failing_orbit.orbit) == 2


def test_f6_split_has_form():
    d = f6_datum()
    split = SphericalDatum.build(2, d.valuation_cone, d.colors)
    cf = ColoredFan(split, f6().maximal_colored_cones)
    assert check_descent_colored(cf).has_form
    assert shortcut_colored(cf) is True


def test_rank_one_always_has_form():
    rng = random.Random(9)
    menu = [entry for entry in datum_menu() if entry[0].rank == 1]
    for _ in range(30):
        cf = random_colored_fan(rng, menu)
        assert check_descent_colored(cf).has_form
        assert shortcut_colored(cf) is True


def test_shortcut_colored_cases():
    horo = SphericalDatum.build(2, whole_space(2), [("D1", (1, 0)), ("D2", (0, 1))], [((0, 1), (1, 0))],
                                [{"D1": "D2", "D2": "D1"}])
    cf = ColoredFan(horo, [colored_cone(2, [(1, 0), (1, 1)], {"D1"}), colored_cone(2, [(0, 1), (1, 1)], {"D2"})])
    assert cf.is_valid and shortcut_colored(cf) is True
    assert shortcut_colored(f6()) is None


def test_invalid_colored_input():
    with pytest.raises(ValueError):
        check_descent_colored(load_example("F6-printed").colored())
