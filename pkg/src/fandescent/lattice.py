"""Exact integer and rational linear algebra on a lattice N = Z^n.

Vectors are tuples of ``int`` (lattice points) or of ``Fraction`` (points of
V = N (x) Q).  Matrices are tuples of row tuples.  Nothing here is mutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


class LatticeError(ValueError):
    pass


def as_vector(v: Iterable) -> Vector:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            out.append(int(x) if x.denominator == 1 else x)
        elif isinstance(x, bool):
            raise LatticeError("booleans are not lattice coordinates")
        elif isinstance(x, int):
            out.append(int(x))
        else:
            out.append(Fraction(x))
    return tuple(out)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(as_vector(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise LatticeError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise LatticeError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def apply(m: Matrix, v: Sequence) -> Vector:
    """Matrix-vector product ``m @ v``."""
    if m and len(m[0]) != len(v):
        raise LatticeError(f"dimension mismatch: {len(m[0])} columns vs vector of length {len(v)}")
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    if a and len(a[0]) != len(b):
        raise LatticeError("dimension mismatch in matrix product")
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def determinant(m: Matrix):
    """Exact determinant by Gaussian elimination over Q."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise LatticeError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in r] for r in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det) if det.denominator == 1 else det


def primitive_part(v: Sequence[int]) -> Vector:
    """Divide an integral vector by the gcd of its coordinates."""
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise LatticeError("zero has no primitive part")
    return tuple(x // g for x in v)


def integral_primitive(v: Sequence) -> Vector:
    """Primitive integral vector positively proportional to a rational vector."""
    if all(type(x) is int for x in v):
        return primitive_part(v)
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive_part(tuple(int(Fraction(x) * den) for x in v))


def row_echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q (zero rows dropped)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return a[:r]


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows))


def span_basis(rows: Sequence[Sequence]) -> tuple[Vector, ...]:
    """Canonical integral basis of the rational span: primitive RREF rows."""
    return tuple(integral_primitive(r) for r in row_echelon(rows))


def kernel_basis(rows: Sequence[Sequence], ncols: int) -> tuple[Vector, ...]:
    """Canonical integral basis of {x : rows . x = 0}."""
    rref = row_echelon(rows)
    pivots = []
    for r in rref:
        pivots.append(next(i for i, x in enumerate(r) if x != 0))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(rref, pivots):
            x[p] = -r[f]
        basis.append(x)
    # canonical form: RREF of the kernel itself
    return span_basis(basis) if basis else ()


def orthogonal_project(v: Sequence, basis: Sequence[Sequence]) -> Vector:
    """Orthogonal projection of ``v`` onto span(basis), exact (Gram system)."""
    if not basis:
        return tuple(Fraction(0) for _ in v)
    k = len(basis)
    gram = [[Fraction(dot(basis[i], basis[j])) for j in range(k)] for i in range(k)]
    rhs = [Fraction(dot(basis[i], v)) for i in range(k)]
    coeffs = solve_square(gram, rhs)
    return tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(len(v)))


def solve_square(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise LatticeError("singular system")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], Matrix, Matrix]:
    """Smith normal form ``left @ m @ right = diag(d_1, ..., d_r, 0, ...)``.

    ``left`` and ``right`` are unimodular, ``d_i >= 0`` and ``d_i | d_{i+1}``.
    The returned diagonal has ``min(rows, cols)`` entries.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    left = [list(r) for r in identity(rows)]
    right = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + f * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in right:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the whole remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    diag = tuple(a[i][i] for i in range(min(rows, cols)))
    return diag, as_matrix(left), as_matrix(right)


@lru_cache(maxsize=4096)
def is_unimodular(m: Matrix) -> bool:
    return len(m) > 0 and all(len(r) == len(m) for r in m) and determinant(m) in (1, -1)


def inverse_unimodular(m: Matrix) -> Matrix:
    n = len(m)
    inv = []
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        cols.append(solve_square(m, e))
    inv = tuple(tuple(int(cols[j][i]) for j in range(n)) for i in range(n))
    return inv


@dataclass(frozen=True)
class FiniteMatrixGroup:
    """A finite group of lattice automorphisms, with its elements enumerated."""

    rank: int
    generators: tuple
    elements: tuple = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def index(self, m: Matrix) -> int:
        return self.elements.index(m)

    def orbit(self, v: Sequence) -> list[Vector]:
        """Distinct images of ``v`` in element order."""
        seen: list[Vector] = []
        for g in self.elements:
            w = apply(g, v)
            if w not in seen:
                seen.append(w)
        return seen


DEFAULT_MAX_ORDER = 10_000


def group_closure(rank: int, generators: Iterable, max_order: int = DEFAULT_MAX_ORDER) -> FiniteMatrixGroup:
    """Close a set of unimodular matrices under multiplication.

    Elements come out breadth-first from the identity; within one BFS layer the
    new elements are sorted lexicographically.
    """
    gens = []
    for g in generators:
        g = as_matrix(g)
        if len(g) != rank or any(len(r) != rank for r in g):
            raise LatticeError(f"generator is not {rank}x{rank}")
        if determinant(g) not in (1, -1):
            raise LatticeError("not a lattice automorphism")
        if g not in gens:
            gens.append(g)
    ident = identity(rank)
    elements = [ident]
    seen = {ident}
    layer = [ident]
    while layer:
        fresh = set()
        for h in layer:
            for g in gens:
                p = matmul(g, h)
                if p not in seen:
                    fresh.add(p)
        layer = sorted(fresh)
        seen.update(layer)
        elements.extend(layer)
        if len(elements) > max_order:
            raise LatticeError("group too large or infinite")
    return FiniteMatrixGroup(rank, tuple(sorted(gens)), tuple(elements))


def trivial_group(rank: int) -> FiniteMatrixGroup:
    return group_closure(rank, [])


def element_order(m: Matrix, bound: int = DEFAULT_MAX_ORDER) -> int:
    ident = identity(len(m))
    p = m
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = matmul(p, m)
    raise LatticeError("element of infinite or excessive order")
