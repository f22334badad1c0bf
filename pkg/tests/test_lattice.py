import random
from math import gcd

import pytest

from fandescent.examples import EPSILON, SWAP
from fandescent.lattice import (
    LatticeError,
    apply,
    determinant,
    element_order,
    group_closure,
    identity,
    inverse_unimodular,
    kernel_basis,
    matmul,
    primitive_part,
    rank,
    smith_normal_form,
    trivial_group,
)


def test_primitive_part():
    assert primitive_part((2, 4, -6)) == (1, 2, -3)
    assert primitive_part((5, 1, -5)) == (5, 1, -5)
    assert primitive_part((0, 0, 7)) == (0, 0, 1)


def test_primitive_part_rejects_zero():
    with pytest.raises(LatticeError):
        primitive_part((0, 0))


def _det_gcd_oracle(m, k):
    """gcd of all k x k minors, brute force."""
    from itertools import combinations
    rows, cols = len(m), len(m[0])
    g = 0
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            g = gcd(g, int(determinant([[m[i][j] for j in cs] for i in rs])))
    return g


def test_smith_normal_form_examples():
    assert smith_normal_form(((2, 0), (0, 3)))[0] == (1, 6)
    sigma_cols = ((5, -5, 4), (1, -5, -1), (-5, 14, 0))
    assert smith_normal_form(sigma_cols)[0] == (1, 1, 1)
    assert smith_normal_form(identity(3))[0] == (1, 1, 1)


def test_smith_normal_form_random_against_minors():
    rng = random.Random(11)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = tuple(tuple(rng.randint(-6, 6) for _ in range(c)) for _ in range(r))
        diag, left, right = smith_normal_form(m)
        d = [x for x in diag if x]
        for i in range(len(d) - 1):
            assert d[i + 1] % d[i] == 0
        # product of the first k invariant factors = gcd of k x k minors
        prod = 1
        for k in range(1, len(d) + 1):
            prod *= d[k - 1]
            assert prod == _det_gcd_oracle(m, k)
        assert len(d) == rank(m)
        # left * m * right is the diagonal
        prodm = matmul(matmul(left, m), right)
        for i in range(r):
            for j in range(c):
                assert prodm[i][j] == (diag[i] if i == j and i < len(diag) else 0)


def test_group_closure_orders():
    assert group_closure(3, [EPSILON]).order == 3
    assert matmul(EPSILON, matmul(EPSILON, EPSILON)) == identity(3)
    assert group_closure(2, [identity(2)]).order == 1
    assert group_closure(2, [SWAP]).order == 2
    assert trivial_group(4).is_trivial


def test_group_closure_rejects_infinite_order():
    with pytest.raises(LatticeError):
        group_closure(2, [((1, 1), (0, 1))], max_order=50)


def test_element_order_and_inverse():
    assert element_order(EPSILON) == 3
    inv = inverse_unimodular(EPSILON)
    assert matmul(inv, EPSILON) == identity(3)


def test_apply():
    assert apply(EPSILON, (5, 1, -5)) == (-1, 4, -5)
    assert apply(EPSILON, (-5, -5, 14)) == (5, 0, 14)
    assert apply(identity(3), (1, 2, 3)) == (1, 2, 3)


def test_kernel_basis_is_kernel():
    rng = random.Random(3)
    for _ in range(40):
        m = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(rng.randint(1, 4))]
        ker = kernel_basis(m, 5)
        assert len(ker) == 5 - rank(m)
        for v in ker:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
