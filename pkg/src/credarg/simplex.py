"""Two-phase tableau simplex over exact rationals.

Solves ``minimize c.x subject to A_eq x = b_eq, A_ge x >= b_ge, x >= 0``.
Pivots follow Bland's rule (lowest-index entering column, lowest-index
leaving basic variable on ratio ties), which cannot cycle; the event
matrices produced by credal sets are highly degenerate, so this matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        p = row[col]
        if p != 1:
            inv = 1 / p
            row[:] = [v * inv if v else v for v in row]
            self.rhs[r] *= inv
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            f = other[col]
            if f:
                other[:] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction], allowed: int) -> list[Fraction]:
        red = list(cost[:allowed])
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[r]
                for j in range(allowed):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Minimize ``cost`` using columns ``< allowed`` as entering candidates."""
        while True:
            red = self.reduced_costs(cost, allowed)
            basic = set(self.basis)
            entering = next(
                (j for j in range(allowed) if red[j] < 0 and j not in basic), None
            )
            if entering is None:
                return OPTIMAL
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def _phase_one(n, A_eq, b_eq, A_ge, b_ge) -> tuple[_Tableau | None, int, int]:
    cons: list[tuple[list[Fraction], Fraction]] = []
    for row, b in zip(A_eq, b_eq):
        cons.append(([Fraction(v) for v in row], Fraction(b)))
    n_slack = len(A_ge)
    for k, (row, b) in enumerate(zip(A_ge, b_ge)):
        slack = [_ZERO] * n_slack
        slack[k] = Fraction(-1)
        cons.append(([Fraction(v) for v in row] + slack, Fraction(b)))
    width = n + n_slack
    cons = [(row + [_ZERO] * (width - len(row)), b) for row, b in cons]
    m = len(cons)

    rows, rhs = [], []
    for i, (row, b) in enumerate(cons):
        if b < 0:
            row, b = [-v for v in row], -b
        art = [_ZERO] * m
        art[i] = Fraction(1)
        rows.append(row + art)
        rhs.append(b)
    tab = _Tableau(rows, rhs, [width + i for i in range(m)])

    phase1 = [_ZERO] * width + [Fraction(1)] * m
    tab.run(phase1, width)
    infeas = sum((tab.rhs[r] for r, b in enumerate(tab.basis) if b >= width), _ZERO)
    if infeas > 0:
        return None, width, tab.pivots

    # Pivot remaining (zero-level) artificials out; drop redundant rows.
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= width:
            col = next((j for j in range(width) if tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    for row in tab.rows:
        del row[width:]
    return tab, width, tab.pivots


def _phase_two(tab: _Tableau, c, n: int, width: int) -> LPResult:
    before = tab.pivots
    cost = [Fraction(v) for v in c] + [_ZERO] * (width - n)
    status = tab.run(cost, width)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots - before)
    x = [_ZERO] * width
    for r, b in enumerate(tab.basis):
        x[b] = tab.rhs[r]
    value = sum((cost[j] * x[j] for j in range(width) if cost[j]), _ZERO)
    return LPResult(OPTIMAL, value, tuple(x[:n]), tab.pivots - before)


def _copy(tab: _Tableau) -> _Tableau:
    return _Tableau([list(r) for r in tab.rows], list(tab.rhs), list(tab.basis))


def solve_lp(
    c: Sequence,
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    A_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
) -> LPResult:
    """Minimize ``c.x`` exactly. Inputs may be ints or Fractions."""
    return solve_lp_many([c], A_eq, b_eq, A_ge, b_ge)[0]


def solve_lp_many(
    costs: Sequence[Sequence],
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    A_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
) -> list[LPResult]:
    """Minimize each cost vector over one feasible region.

    Phase 1 runs once; each objective starts phase 2 from a copy of the
    same feasible basis.
    """
    n = len(costs[0])
    tab, width, pivots = _phase_one(n, A_eq, b_eq, A_ge, b_ge)
    if tab is None:
        return [LPResult(INFEASIBLE, pivots=pivots) for _ in costs]
    return [_phase_two(_copy(tab), c, n, width) for c in costs]
