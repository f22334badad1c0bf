"""Exact rational LP feasibility with Farkas certificates.

A :class:`LinearSystem` has free variables ``x``, equality rows ``e.x = d`` and
inequality rows ``a.x >= b``.  :func:`lp_feasible` either returns a rational
solution or a :class:`FarkasCertificate`: multipliers ``u >= 0`` on the
inequalities and ``z`` on the equalities with

    sum u_i a_i + sum z_j e_j = 0   and   sum u_i b_i + sum z_j d_j > 0.

Both outcomes are re-checked by plain arithmetic before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

Row = tuple  # (coefficients, rhs)


class MalformedSystem(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    variables: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        for coeffs, _ in self.equalities + self.inequalities:
            if len(coeffs) != self.variables:
                raise MalformedSystem(
                    f"row of length {len(coeffs)} in a system of {self.variables} variables")

    @classmethod
    def build(cls, variables: int, equalities=(), inequalities=()) -> "LinearSystem":
        def norm(rows):
            return tuple((tuple(Fraction(c) for c in coeffs), Fraction(rhs)) for coeffs, rhs in rows)
        return cls(variables, norm(equalities), norm(inequalities))

    def is_satisfied_by(self, x: Sequence) -> bool:
        if len(x) != self.variables:
            return False
        for coeffs, rhs in self.equalities:
            if sum(c * v for c, v in zip(coeffs, x)) != rhs:
                return False
        for coeffs, rhs in self.inequalities:
            if sum(c * v for c, v in zip(coeffs, x)) < rhs:
                return False
        return True


@dataclass(frozen=True)
class FarkasCertificate:
    inequality_multipliers: tuple  # nonnegative, one per inequality row
    equality_multipliers: tuple = ()

    def verify(self, system: LinearSystem) -> bool:
        return verify_farkas(system, self)


@dataclass(frozen=True)
class Feasible:
    solution: tuple
    feasible: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Infeasible:
    certificate: FarkasCertificate
    feasible: bool = field(default=False, init=False)


def verify_farkas(system: LinearSystem, cert: FarkasCertificate) -> bool:
    """Check a Farkas certificate with exact arithmetic only."""
    u = [Fraction(x) for x in cert.inequality_multipliers]
    z = [Fraction(x) for x in cert.equality_multipliers]
    if len(u) != len(system.inequalities) or len(z) != len(system.equalities):
        return False
    if any(x < 0 for x in u):
        return False
    combo = [Fraction(0)] * system.variables
    rhs = Fraction(0)
    for mult, (coeffs, b) in list(zip(u, system.inequalities)) + list(zip(z, system.equalities)):
        if mult == 0:
            continue
        for k, c in enumerate(coeffs):
            combo[k] += mult * c
        rhs += mult * b
    return all(c == 0 for c in combo) and rhs > 0


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _integral(values: Sequence[Fraction]) -> tuple:
    den = 1
    for v in values:
        den = _lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return tuple(Fraction(v // g) for v in ints)


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        den = _lcm(den, v.denominator)
    return den


def _reduce(row: list, den: int) -> tuple[list, int]:
    g = gcd(den, *row)
    if g > 1:
        return [x // g for x in row], den // g
    return row, den


def lp_feasible(system: LinearSystem, method: str = "auto") -> Feasible | Infeasible:
    """Decide feasibility exactly.

    ``method`` is ``"primal"``, ``"dual"`` or ``"auto"`` (dual when rows
    outnumber variables).  Both give the same verdict; the choice only
    affects speed and which solution or certificate comes back.
    """
    if method not in ("auto", "primal", "dual"):
        raise ValueError(f"unknown method {method!r}")
    m = len(system.inequalities) + len(system.equalities)
    if method == "dual" or (method == "auto" and m > system.variables + 1):
        return _dual_side(system)
    return _phase_one(system)


def _pivot(rows: list, dens: list, r: int, enter: int, obj: list, obj_den: int):
    """Pivot the integer tableau in place; returns the new objective row."""
    piv = rows[r][enter]
    if piv < 0:  # keep denominators positive
        rows[r], piv = [-x for x in rows[r]], -piv
    rows[r], dens[r] = _reduce(rows[r], piv)
    prow = rows[r]
    ppiv = prow[enter]
    for i in range(len(rows)):
        f = rows[i][enter]
        if i == r or f == 0:
            continue
        rows[i], dens[i] = _reduce([x * ppiv - f * y for x, y in zip(rows[i], prow)], dens[i] * ppiv)
    f = obj[enter]
    if f:
        return _reduce([x * ppiv - f * y for x, y in zip(obj, prow)], obj_den * ppiv)
    return obj, obj_den


def _ratio_row(rows: list, basis: list, enter: int, rhs: int) -> int:
    r = -1
    for i, row in enumerate(rows):
        a = row[enter]
        if a > 0:
            if r < 0:
                r = i
                continue
            lhs = row[rhs] * rows[r][enter]
            right = rows[r][rhs] * a
            if lhs < right or (lhs == right and basis[i] < basis[r]):
                r = i
    return r


def _dual_side(system: LinearSystem) -> Feasible | Infeasible:
    """Simplex on the normalised Farkas problem.

    Maximise ``b.y + d.z`` over ``A^T y + E^T z = 0``, ``sum y + sum |z| <= 1``,
    ``y >= 0``.  A positive optimum is a certificate; at optimum zero the
    simplex multipliers of the ``n`` equality rows are a feasible point.
    The tableau has ``n + 1`` rows however many constraints there are.
    Columns: ``y``, ``z+``, ``z-``, one artificial per variable, the slack.
    """
    n = system.variables
    ineqs, eqs = system.inequalities, system.equalities
    scales, cols, costs = [], [], []
    for coeffs, rhs in list(ineqs) + list(eqs):
        k = _lcm_den(list(coeffs) + [rhs])
        scales.append(k)
        cols.append([int(c * k) for c in coeffs])
        costs.append(int(rhs * k))
    n_ineq = len(ineqs)
    real = list(zip(cols[:n_ineq], costs[:n_ineq]))
    for a, b in zip(cols[n_ineq:], costs[n_ineq:]):
        real += [(a, b), ([-x for x in a], -b)]
    width = len(real)
    total = width + n + 1
    rows = []
    for k in range(n + 1):
        row = [0] * (total + 1)
        for j, (a, _) in enumerate(real):
            row[j] = a[k] if k < n else 1
        row[width + k] = 1
        if k == n:
            row[total] = 1
        rows.append(row)
    dens = [1] * (n + 1)
    basis = list(range(width, width + n + 1))
    obj = [-b for _, b in real] + [0] * (n + 2)
    obj_den = 1

    # the equality rows have right-hand side 0, so any nonzero entry may pivot
    for k in range(n):
        enter = next((j for j in range(width) if rows[k][j]), None)
        if enter is not None:
            obj, obj_den = _pivot(rows, dens, k, enter, obj, obj_den)
            basis[k] = enter
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None and obj[total - 1] < 0:
            enter = total - 1
        if enter is None:
            break
        r = _ratio_row(rows, basis, enter, total)
        if r < 0:
            raise AssertionError("normalised Farkas problem is unbounded")
        obj, obj_den = _pivot(rows, dens, r, enter, obj, obj_den)
        basis[r] = enter

    cost = [b for _, b in real] + [0] * (n + 1)
    value = sum(Fraction(cost[basis[r]] * rows[r][total], dens[r]) for r in range(n + 1))
    if value > 0:
        w = [Fraction(0)] * width
        for r in range(n + 1):
            if basis[r] < width:
                w[basis[r]] = Fraction(rows[r][total], dens[r])
        mult = [w[i] * scales[i] for i in range(n_ineq)]
        for j in range(len(eqs)):
            mult.append((w[n_ineq + 2 * j] - w[n_ineq + 2 * j + 1]) * scales[n_ineq + j])
        scaled = _integral(mult)
        cert = FarkasCertificate(scaled[:n_ineq], scaled[n_ineq:])
        if not verify_farkas(system, cert):
            raise AssertionError("Farkas problem optimum is not a certificate")
        return Infeasible(cert)
    x = tuple(sum((Fraction(cost[basis[r]] * rows[r][width + k], dens[r]) for r in range(n + 1)), Fraction(0))
              for k in range(n))
    if not system.is_satisfied_by(x):
        raise AssertionError("simplex multipliers violate the system")
    return Feasible(x)


def _phase_one(system: LinearSystem) -> Feasible | Infeasible:
    """Phase-I simplex on the system itself (Bland's rule).

    The tableau is kept in integers: row i stands for ``rows[i] / dens[i]``.
    Only rows with a nonzero entry in the pivot column change at a pivot.
    Columns are ``x+``, ``x-``, one slack per inequality, then artificials
    for the rows that cannot start with their slack basic.
    """
    n = system.variables
    n_ineq = len(system.inequalities)
    n_eq = len(system.equalities)
    m = n_ineq + n_eq
    if m == 0:
        return Feasible(tuple(Fraction(0) for _ in range(n)))

    # integral rows  a.x - s = b  (inequalities) and  e.x = d  (equalities)
    scales, signs, raw = [], [], []
    for i, (coeffs, rhs) in enumerate(list(system.inequalities) + list(system.equalities)):
        k = _lcm_den(list(coeffs) + [rhs])
        a = [int(c * k) for c in coeffs]
        b = int(rhs * k)
        s = -1 if b < 0 or (b == 0 and i < n_ineq) else 1
        scales.append(k)
        signs.append(s)
        raw.append((a, b))
    needs_art = [not (i < n_ineq and signs[i] == -1) for i in range(m)]
    art_col = {}
    width = 2 * n + n_ineq
    for i in range(m):
        if needs_art[i]:
            art_col[i] = width + len(art_col)
    total = width + len(art_col)

    rows, dens, basis = [], [], []
    for i, (a, b) in enumerate(raw):
        s = signs[i]
        row = [0] * (total + 1)
        for k, c in enumerate(a):
            row[k] = s * c
            row[n + k] = -s * c
        if i < n_ineq:
            row[2 * n + i] = -s
        if needs_art[i]:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(2 * n + i)
        row[total] = s * b
        rows.append(row)
        dens.append(1)
    # reduced costs of the phase-I objective (sum of artificials)
    obj = [0] * (total + 1)
    for i in range(m):
        if needs_art[i]:
            obj = [x - y for x, y in zip(obj, rows[i])]
    for j in art_col.values():
        obj[j] = 0
    obj_den = 1

    while True:
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            break
        r = _ratio_row(rows, basis, enter, total)
        if r < 0:  # phase-I objective is bounded below by 0
            raise AssertionError("unbounded phase-I problem")
        obj, obj_den = _pivot(rows, dens, r, enter, obj, obj_den)
        basis[r] = enter

    value = sum(Fraction(rows[i][total], dens[i]) for i in range(m) if basis[i] >= width)
    if value == 0:
        w = [Fraction(0)] * total
        for i in range(m):
            w[basis[i]] = Fraction(rows[i][total], dens[i])
        x = tuple(w[k] - w[n + k] for k in range(n))
        if not system.is_satisfied_by(x):
            raise AssertionError("simplex returned a point violating the system")
        return Feasible(x)

    # phase-I duals: y_i = 1 - d(artificial_i), or y_i = sign_i * d(slack_i)
    y = []
    for i in range(m):
        if needs_art[i]:
            y.append(1 - Fraction(obj[art_col[i]], obj_den))
        else:
            y.append(signs[i] * Fraction(obj[2 * n + i], obj_den))
    mult = [signs[i] * y[i] * scales[i] for i in range(m)]
    scaled = _integral(mult)
    cert = FarkasCertificate(scaled[:n_ineq], scaled[n_ineq:])
    if not verify_farkas(system, cert):
        raise AssertionError("phase-I duals do not form a Farkas certificate")
    return Infeasible(cert)
