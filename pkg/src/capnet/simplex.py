"""Exact rational simplex for covering LPs with box-bounded variables.

Solves   min c.x   s.t.   A x >= b,   0 <= x <= 1

entirely over fractions.Fraction, so optima come back exact and equality
comparisons against them are meaningful.  The solver assumes x = 1
satisfies every row (the callers only generate inequalities that the full
edge set meets), which gives a feasible starting basis for free: all
structural variables nonbasic at their upper bound, one surplus variable
basic per row.  From there it runs the upper-bounded simplex method with
Bland's rule, so every pivot choice is the lowest eligible index and the
run is deterministic and cycle-free.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def solve_box_covering_lp(costs, rows):
    """Minimize costs.x subject to the given rows and 0 <= x <= 1.

    costs: sequence of nonnegative rationals, one per structural variable.
    rows: sequence of (coeffs, rhs); each row means coeffs.x >= rhs.
    Returns (x, objective) with every entry a Fraction.
    Raises ValueError if some row is not satisfied by x = 1.
    """
    m = len(costs)
    costs = [Fraction(c) for c in costs]
    if not rows:
        return [Fraction(0)] * m, Fraction(0)

    r = len(rows)
    n = m + r  # structural variables then one surplus per row
    tab = []
    for coeffs, rhs in rows:
        if len(coeffs) != m:
            raise ValueError("row width does not match variable count")
        coeffs = [Fraction(v) for v in coeffs]
        rhs = Fraction(rhs)
        if sum(coeffs) < rhs:
            raise ValueError("row not satisfied at x = 1; constraint pool is inconsistent")
        # Stored as -coeffs.x + s = -rhs so the starting basic (surplus)
        # columns carry +1 and the tableau begins in canonical form.
        tab.append([-v for v in coeffs] + [_ZERO] * r + [-rhs])
    for i in range(r):
        tab[i][m + i] = _ONE

    upper = [_ONE] * m + [None] * r  # None: unbounded above
    zrow = costs + [_ZERO] * r       # reduced costs
    basis = [m + i for i in range(r)]
    in_basis = [False] * n
    for v in basis:
        in_basis[v] = True
    at_upper = [True] * m + [False] * r  # meaningful for nonbasic variables only

    def basic_values():
        vals = []
        for i in range(r):
            acc = tab[i][n]
            row = tab[i]
            for j in range(n):
                if not in_basis[j] and at_upper[j]:
                    acc -= row[j]
            vals.append(acc)
        return vals

    while True:
        xb = basic_values()
        entering = -1
        direction = 0
        for j in range(n):
            if in_basis[j]:
                continue
            if at_upper[j]:
                if zrow[j] > 0:
                    entering, direction = j, -1
                    break
            elif zrow[j] < 0:
                entering, direction = j, 1
                break
        if entering < 0:
            x = [None] * n
            for j in range(n):
                if not in_basis[j]:
                    x[j] = _ONE if at_upper[j] else _ZERO
            for i in range(r):
                x[basis[i]] = xb[i]
            solution = [Fraction(x[j]) for j in range(m)]
            objective = sum((costs[j] * solution[j] for j in range(m)), _ZERO)
            return solution, objective

        # Ratio test: entering moves by t >= 0 away from its current bound;
        # basic variable i changes at rate -direction * tab[i][entering].
        limit = upper[entering]  # own bound-to-bound distance, None if infinite
        block_row = -1
        block_to_upper = False
        for i in range(r):
            rate = direction * tab[i][entering]
            if rate > 0:
                t = xb[i] / rate
                to_upper = False
            elif rate < 0:
                ub = upper[basis[i]]
                if ub is None:
                    continue
                t = (ub - xb[i]) / (-rate)
                to_upper = True
            else:
                continue
            # Strict improvement keeps bound flips preferred on ties; among
            # tying rows the smallest basic variable index leaves (Bland).
            if limit is None or t < limit:
                limit = t
                block_row = i
                block_to_upper = to_upper
            elif t == limit and block_row >= 0 and basis[i] < basis[block_row]:
                block_row = i
                block_to_upper = to_upper
        if limit is None:
            raise ArithmeticError("LP is unbounded; the feasible region should be a box")

        if block_row < 0:
            # Entering variable crosses to its other bound; basis unchanged.
            at_upper[entering] = not at_upper[entering]
            continue

        leaving = basis[block_row]
        in_basis[leaving] = False
        at_upper[leaving] = block_to_upper
        basis[block_row] = entering
        in_basis[entering] = True

        piv = tab[block_row][entering]
        prow = tab[block_row]
        inv = 1 / piv
        for j in range(n + 1):
            if prow[j]:
                prow[j] *= inv
        for i in range(r):
            if i == block_row:
                continue
            f = tab[i][entering]
            if f:
                row = tab[i]
                for j in range(n + 1):
                    if prow[j]:
                        row[j] -= f * prow[j]
        f = zrow[entering]
        if f:
            for j in range(n):
                if prow[j]:
                    zrow[j] -= f * prow[j]
