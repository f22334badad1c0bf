import random
from fractions import Fraction

import pytest

from fandescent.lp import FarkasCertificate, LinearSystem, MalformedSystem, lp_feasible, verify_farkas
from oracles import fm_feasible, random_dense_system, random_system


def test_simple_infeasible_has_certificate():
    sys_ = LinearSystem.build(1, inequalities=[((1,), 1), ((-1,), 0)])
    res = lp_feasible(sys_)
    assert not res.feasible
    assert res.certificate.inequality_multipliers == (1, 1)
    assert verify_farkas(sys_, res.certificate)


def test_simplex_corner():
    sys_ = LinearSystem.build(2, equalities=[((1, 1), 1)], inequalities=[((1, 0), 0), ((0, 1), 0)])
    res = lp_feasible(sys_)
    assert res.feasible and sys_.is_satisfied_by(res.solution)


def test_empty_system_is_feasible():
    assert lp_feasible(LinearSystem.build(3)).feasible


def test_inconsistent_equalities():
    sys_ = LinearSystem.build(2, equalities=[((1, 1), 1), ((2, 2), 3)])
    for method in ("primal", "dual"):
        res = lp_feasible(sys_, method=method)
        assert not res.feasible and verify_farkas(sys_, res.certificate)


def test_zero_variables():
    assert lp_feasible(LinearSystem.build(0, inequalities=[((), 0)])).feasible
    assert not lp_feasible(LinearSystem.build(0, inequalities=[((), 1)])).feasible


def test_malformed_rows():
    with pytest.raises(MalformedSystem):
        LinearSystem.build(2, inequalities=[((1,), 0)])
    with pytest.raises(ValueError):
        lp_feasible(LinearSystem.build(1), method="interior")


def test_bad_certificates_rejected():
    sys_ = LinearSystem.build(1, inequalities=[((1,), 1), ((-1,), 0)])
    assert not verify_farkas(sys_, FarkasCertificate((1, -1)))
    assert not verify_farkas(sys_, FarkasCertificate((1,)))
    assert not verify_farkas(sys_, FarkasCertificate((2, 1)))
    assert not verify_farkas(sys_, FarkasCertificate((0, 0)))


def test_rational_coefficients():
    sys_ = LinearSystem.build(2, inequalities=[((Fraction(1, 3), Fraction(-2, 7)), Fraction(5, 11)),
                                               ((Fraction(-1, 3), Fraction(2, 7)), Fraction(-5, 11))])
    res = lp_feasible(sys_)
    assert res.feasible and sys_.is_satisfied_by(res.solution)


@pytest.mark.parametrize("method", ["primal", "dual"])
def test_methods_agree_with_fourier_motzkin(method):
    rng = random.Random(2024)
    for _ in range(150):
        n, eqs, ineqs = random_system(rng, max_vars=8) if rng.random() < 0.7 else random_dense_system(rng, 3, 20)
        sys_ = LinearSystem.build(n, eqs, ineqs)
        res = lp_feasible(sys_, method=method)
        assert res.feasible == fm_feasible(n, eqs, ineqs)
        if res.feasible:
            assert sys_.is_satisfied_by(res.solution)
        else:
            assert verify_farkas(sys_, res.certificate)
            assert all(isinstance(x, Fraction) and x.denominator == 1 for x in res.certificate.inequality_multipliers)


def test_fourier_motzkin_oracle_sanity():
    assert fm_feasible(1, [], [((1,), 0), ((-1,), -2)])
    assert not fm_feasible(1, [], [((1,), 1), ((-1,), 0)])
    assert not fm_feasible(2, [((1, 1), 1)], [((1, 0), 1), ((0, 1), 1)])
    assert fm_feasible(2, [((1, -1), 0)], [((1, 0), 3)])
