"""Exact rational linear feasibility via phase-1 simplex.

Solves  A x = b  with the first ``num_nonneg`` variables constrained to be
nonnegative and the remaining ``num_free`` variables unconstrained.  All
arithmetic is in ``Fraction``; feasibility is decided exactly, never by a
numerical threshold.  Bland's anti-cycling rule keeps the pivoting finite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_feasibility(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    num_nonneg: int,
    num_free: int = 0,
) -> Optional[List[Fraction]]:
    """Find x with rows @ x = rhs, x_i >= 0 for i < num_nonneg, rest free.

    Returns the variable values (free variables recombined) or None when the
    system is infeasible.
    """
    m = len(rows)
    ncols = num_nonneg + num_free
    for row in rows:
        if len(row) != ncols:
            raise ValueError("row length does not match variable count")
    if len(rhs) != m:
        raise ValueError("rhs length does not match row count")

    # split each free variable into a difference of two nonnegative ones
    total = num_nonneg + 2 * num_free
    tab: List[List[Fraction]] = []
    b: List[Fraction] = []
    for row, beta in zip(rows, rhs):
        r = [Fraction(v) for v in row[:num_nonneg]]
        for j in range(num_free):
            v = Fraction(row[num_nonneg + j])
            r.extend((v, -v))
        beta = Fraction(beta)
        if beta < 0:
            r = [-v for v in r]
            beta = -beta
        tab.append(r)
        b.append(beta)

    # phase-1: artificial basis, minimise the sum of artificials
    basis = [total + i for i in range(m)]
    width = total + m
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        tab[i] = tab[i] + art
    # reduced cost row for objective sum(artificials): z_j - c_j = sum of rows
    cost = [ZERO] * width
    obj = ZERO
    for i in range(m):
        for j in range(width):
            cost[j] += tab[i][j]
        obj += b[i]
    for i in range(m):
        cost[total + i] = ZERO

    while True:
        enter = -1
        for j in range(width):
            if cost[j] > 0 and j not in basis:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best: Optional[Fraction] = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # phase-1 objective is bounded below by 0, so this cannot happen
            raise RuntimeError("unbounded phase-1 problem")
        piv = tab[leave][enter]
        inv = ONE / piv
        tab[leave] = [v * inv for v in tab[leave]]
        b[leave] *= inv
        prow = tab[leave]
        pb = b[leave]
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter]
            if f != 0:
                tab[i] = [v - f * pv for v, pv in zip(tab[i], prow)]
                b[i] -= f * pb
        f = cost[enter]
        if f != 0:
            cost = [v - f * pv for v, pv in zip(cost, prow)]
            obj -= f * pb
        basis[leave] = enter

    if obj != 0:
        return None

    values = [ZERO] * total
    for i, var in enumerate(basis):
        if var < total:
            values[var] = b[i]
        elif b[i] != 0:
            # degenerate artificial still in the basis must carry zero
            return None
    out = values[:num_nonneg]
    for j in range(num_free):
        out.append(values[num_nonneg + 2 * j] - values[num_nonneg + 2 * j + 1])
    return out
