"""Richardson extrapolation for sequences sampled on a geometric schedule.

Samples f(y_k) with y_k = y0 * ratio**k are modeled as a polynomial in
1/y plus a rapidly decaying floor; the triangular table eliminates the
1/y**j terms order by order.
"""

import mpmath
from mpmath import mp

from .errors import ConvergenceError


def richardson_table(values, ratio=2, order=None, precision=256):
    """Triangular Richardson table for samples at y_k = y0 * ratio**k.

    values: sequence of mpf/mpc samples, index k increasing (y increasing).
    Returns the full table; table[i][j] eliminates 1/y**1 .. 1/y**j using
    rows i-j .. i.
    """
    m = len(values)
    if order is None:
        order = m - 1
    order = min(order, m - 1)
    with mp.workprec(precision + 32):
        table = [[mpmath.mpf(0)] * (order + 1) for _ in range(m)]
        for i, v in enumerate(values):
            table[i][0] = +v
        for j in range(1, order + 1):
            factor = mpmath.mpf(ratio) ** j
            for i in range(j, m):
                table[i][j] = (factor * table[i][j - 1] - table[i - 1][j - 1]) / (
                    factor - 1
                )
    return table


def richardson_limit(values, ratio=2, order=None, precision=256, scale=None):
    """Extrapolated limit and an error estimate from the last column.

    The estimate combines the last same-column difference with the working
    precision floor; it is required to be on a decreasing trend along the
    column, otherwise ConvergenceError is raised.
    """
    m = len(values)
    if m < 3:
        raise ConvergenceError("need at least three samples to extrapolate")
    if order is None:
        order = m - 1
    order = min(order, m - 1)
    table = richardson_table(values, ratio, order, precision)
    with mp.workprec(precision + 32):
        limit = table[m - 1][order]
        column = [table[i][order] for i in range(order, m)]
        diffs = [abs(column[i + 1] - column[i]) for i in range(len(column) - 1)]
        if scale is None:
            scale = max((abs(v) for v in values), default=mpmath.mpf(1))
        floor = (mpmath.mpf(1) + scale) * mpmath.mpf(2) ** (-precision + 8)
        if diffs:
            estimate = diffs[-1] * 4 + floor
        else:
            estimate = floor
        # non-convergence guard: the tail of the column must not grow
        if len(diffs) >= 2 and diffs[-1] > diffs[0] * 4 and diffs[-1] > floor * 16:
            raise ConvergenceError(
                "extrapolation differences are increasing; "
                "bad input or insufficient precision"
            )
    return limit, estimate, table


def vector_richardson(rows, ratio=2, order=None, precision=256):
    """Componentwise extrapolation of a list of equal-length sample vectors.

    Returns (limit vector, per-component estimates, tables).
    """
    n = len(rows[0])
    limits, estimates, tables = [], [], []
    with mp.workprec(precision + 32):
        scale = max(
            (abs(x) for row in rows for x in row), default=mpmath.mpf(1)
        )
    for c in range(n):
        lim, est, tab = richardson_limit(
            [row[c] for row in rows], ratio, order, precision, scale=scale
        )
        limits.append(lim)
        estimates.append(est)
        tables.append(tab)
    return limits, estimates, tables
