"""Exact two-phase simplex, Bland's rule for termination.

Small dense tableaux only; every LP in the package is a few dozen
variables at most, so clarity wins over sparse tricks.  Arithmetic runs on
gmpy2 rationals; results come back as Fractions.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .ext import INF, NEG_INF

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
_ZERO = mpq(0)


def _q(x):
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass
class LpResult:
    status: str
    optimum: object = None
    witness: list = field(default_factory=list)

    @property
    def feasible(self):
        return self.status != INFEASIBLE


def _pivot(tab, basis, r, c):
    row = tab[r]
    p = row[c]
    if p != 1:
        row = tab[r] = [x / p for x in row]
    for k, other in enumerate(tab):
        if k == r:
            continue
        f = other[c]
        if f:
            tab[k] = [a - f * b if b else a for a, b in zip(other, row)]
    basis[r] = c


def _run(tab, basis, n_cols, allowed):
    """Minimise the objective stored in the last row; returns False if unbounded."""
    obj = tab[-1]
    while True:
        obj = tab[-1]
        enter = next((j for j in range(n_cols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return True
        best, leave = None, None
        for r in range(len(tab) - 1):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return False
        _pivot(tab, basis, leave, enter)


def solve(c, a_ub=(), b_ub=(), a_eq=(), b_eq=(), a_ge=(), b_ge=(), free=(), maximize=False):
    """min (or max) c.x subject to a_ub x <= b_ub, a_eq x = b_eq, a_ge x >= b_ge.

    Variables are nonnegative except those listed in ``free``.
    """
    n = len(c)
    c = [_q(x) for x in c]
    if maximize:
        c = [-x for x in c]
    free = set(free)
    # column map: original var -> list of (column, sign)
    cols = []
    ncol = 0
    for j in range(n):
        if j in free:
            cols.append(((ncol, 1), (ncol + 1, -1)))
            ncol += 2
        else:
            cols.append(((ncol, 1),))
            ncol += 1
    rows = []
    for block, rhs, kind in ((a_ub, b_ub, -1), (a_eq, b_eq, 0), (a_ge, b_ge, 1)):
        for coeffs, b in zip(block, rhs):
            if len(coeffs) != n:
                raise ValueError("constraint width %d != %d variables" % (len(coeffs), n))
            rows.append(([_q(x) for x in coeffs], _q(b), kind))
    n_slack = sum(1 for _, _, k in rows if k != 0)
    m = len(rows)
    width = ncol + n_slack + m
    tab, basis = [], []
    s = ncol
    for r, (coeffs, b, kind) in enumerate(rows):
        row = [_ZERO] * (width + 1)
        for j in range(n):
            if coeffs[j]:
                for col, sg in cols[j]:
                    row[col] = coeffs[j] * sg
        if kind != 0:
            row[s] = mpq(1) if kind < 0 else mpq(-1)
            s += 1
        row[-1] = b
        if b < 0:
            row = [-x for x in row]
        row[ncol + n_slack + r] = mpq(1)
        tab.append(row)
        basis.append(ncol + n_slack + r)
    art0 = ncol + n_slack
    # phase 1: minimise the sum of artificials
    obj = [_ZERO] * (width + 1)
    for row in tab:
        obj = [a - b for a, b in zip(obj, row)]
    for k in range(art0, width):
        obj[k] = _ZERO
    tab.append(obj)
    _run(tab, basis, width, [True] * width)
    if tab[-1][-1] != 0:
        return LpResult(INFEASIBLE, None, [])
    # drive remaining artificials out of the basis
    r = 0
    while r < len(tab) - 1:
        if basis[r] >= art0:
            j = next((j for j in range(art0) if tab[r][j] != 0), None)
            if j is None:
                del tab[r]
                del basis[r]
                continue
            _pivot(tab, basis, r, j)
        r += 1
    # phase 2
    obj = [_ZERO] * (width + 1)
    for j in range(n):
        for col, sg in cols[j]:
            obj[col] = c[j] * sg
    for r, b in enumerate(basis):
        f = obj[b]
        if f:
            obj = [a - f * x for a, x in zip(obj, tab[r])]
    tab[-1] = obj
    allowed = [j < art0 for j in range(width)]
    if not _run(tab, basis, width, allowed):
        return LpResult(UNBOUNDED, INF if maximize else NEG_INF, [])
    val = [_ZERO] * width
    for r, b in enumerate(basis):
        val[b] = tab[r][-1]
    x = [sum((val[col] * sg for col, sg in cols[j]), _ZERO) for j in range(n)]
    opt = sum((ci * xi for ci, xi in zip(c, x)), _ZERO)
    return LpResult(OPTIMAL, _frac(-opt if maximize else opt), [_frac(v) for v in x])
