"""Exact rational linear programming (two-phase tableau simplex, Bland's rule).

Small dense problems only: the feasibility programs built in
:mod:`rauzy_ends.suspension` have a few dozen rows and columns.  All pivoting
is done on ``gmpy2.mpq`` and results are returned as ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

ZERO = mpq(0)


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[int, Fraction]  # variable index -> coefficient
    sense: str  # "<=", ">=", "=="
    rhs: Fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _pivot(T: list[list], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    pv = row[c]
    if pv != 1:
        row = [v / pv for v in row]
        T[r] = row
    nz = [j for j, v in enumerate(row) if v != 0]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f != 0:
            for j in nz:
                other[j] -= f * row[j]
    basis[r] = c


def _simplex(T: list[list], basis: list[int], ncols: int, allowed: Sequence[bool]) -> str:
    """Maximize the objective stored in the last row of ``T`` (as -c).

    Row layout: constraint rows then objective row; last column is the rhs.
    """
    obj = T[-1]
    while True:
        enter = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(len(T) - 1):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
        obj = T[-1]


def maximize(
    objective: dict[int, Fraction],
    constraints: Sequence[Constraint],
    nvars: int,
) -> LPResult:
    """Maximize ``objective . x`` subject to ``constraints`` and ``x >= 0``."""
    rows = []
    for con in constraints:
        coeffs = {j: mpq(v) for j, v in con.coeffs.items() if v != 0}
        rhs, sense = mpq(con.rhs), con.sense
        if rhs < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        rows.append((coeffs, sense, rhs))

    n_slack = sum(1 for _, s, _ in rows if s != "==")
    n_art = sum(1 for _, s, _ in rows if s != "<=")
    ncols = nvars + n_slack + n_art
    T: list[list] = []
    basis: list[int] = []
    art_cols: list[int] = []
    si, ai = nvars, nvars + n_slack
    for coeffs, sense, rhs in rows:
        row = [ZERO] * (ncols + 1)
        for j, v in coeffs.items():
            row[j] = v
        row[-1] = rhs
        if sense == "<=":
            row[si] = mpq(1)
            basis.append(si)
            si += 1
        else:
            if sense == ">=":
                row[si] = mpq(-1)
                si += 1
            row[ai] = mpq(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        T.append(row)

    # phase 1: maximize -(sum of artificials)
    if art_cols:
        obj = [ZERO] * (ncols + 1)
        for c in art_cols:
            obj[c] = mpq(1)
        for i, b in enumerate(basis):
            if b in art_cols:
                obj = [o - v for o, v in zip(obj, T[i])]
        T.append(obj)
        _simplex(T, basis, ncols, [True] * ncols)
        if T[-1][-1] != 0:
            return LPResult("infeasible", None, None)
        T.pop()
        art = set(art_cols)
        # drive remaining artificials out of the basis (they sit at zero)
        for i in range(len(T)):
            if basis[i] in art:
                for j in range(nvars + n_slack):
                    if T[i][j] != 0:
                        _pivot(T, basis, i, j)
                        break
        keep = [i for i in range(len(T)) if basis[i] not in art]
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]

    allowed = [j < nvars + n_slack for j in range(ncols)]
    obj = [ZERO] * (ncols + 1)
    for j, v in objective.items():
        obj[j] = -mpq(v)
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [o - f * v for o, v in zip(obj, T[i])]
    T.append(obj)
    status = _simplex(T, basis, ncols, allowed)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = [ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = T[i][-1]
    return LPResult("optimal", tuple(_frac(v) for v in x), _frac(T[-1][-1]))


class Model:
    """Tiny modelling layer: bounded variables, linear rows, one objective."""

    def __init__(self) -> None:
        self.lower: list[Fraction] = []
        self.upper: list[Fraction | None] = []
        self.rows: list[tuple[dict[int, Fraction], str, Fraction]] = []

    def var(self, lower, upper=None) -> int:
        self.lower.append(Fraction(lower))
        self.upper.append(None if upper is None else Fraction(upper))
        return len(self.lower) - 1

    def add(self, coeffs: dict[int, Fraction], sense: str, rhs=0) -> None:
        merged: dict[int, Fraction] = {}
        for j, v in coeffs.items():
            merged[j] = merged.get(j, Fraction(0)) + Fraction(v)
        self.rows.append((merged, sense, Fraction(rhs)))

    def maximize(self, objective: dict[int, Fraction]) -> LPResult:
        # shift every variable to v = lower + v' with v' >= 0
        cons = []
        for coeffs, sense, rhs in self.rows:
            shift = sum(v * self.lower[j] for j, v in coeffs.items())
            cons.append(Constraint(coeffs, sense, rhs - shift))
        for j, ub in enumerate(self.upper):
            if ub is not None:
                cons.append(Constraint({j: Fraction(1)}, "<=", ub - self.lower[j]))
        res = maximize(objective, cons, len(self.lower))
        if res.status != "optimal":
            return res
        x = tuple(v + lo for v, lo in zip(res.x, self.lower))
        value = sum((Fraction(c) * x[j] for j, c in objective.items()), Fraction(0))
        return LPResult("optimal", x, value)
