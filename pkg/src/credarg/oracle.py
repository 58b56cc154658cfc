"""Grid oracle for conditional bounds.

Searches the distributions whose masses are all multiples of ``1/q`` for
some ``q <= resolution``. Such a distribution is an integer count vector
``n`` with ``sum(n) <= resolution`` (every statement row is homogeneous, and
so is the conditional probability, so rescaling does not matter). Shares no
code with the simplex path: worlds are grouped by their own signature and
the grid is either enumerated outright or searched with an integer program
(HiGHS) inside a Dinkelbach loop on the ratio.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import LinearConstraint, milp

from .credal import CredalSet, FormulaLike, Interval
from .logic import TOP, as_formula, model_mask

ENUMERATION_LIMIT = 50_000


def _scaled_row(bound: Fraction, both, cond) -> list[int]:
    # q * P(t & c) - p * P(c) for bound = p/q
    p, q = bound.numerator, bound.denominator
    return [q * b - p * d for b, d in zip(both, cond)]


class _Grid:
    def __init__(self, c: CredalSet, target, evidence):
        space = c.space
        t = as_formula(target, space)
        e = as_formula(evidence, space)
        masks = []
        for s in c.statements:
            cond = model_mask(s.condition, space)
            masks.append(model_mask(s.target, space) & cond)
            masks.append(cond)
        e_mask = model_mask(e, space)
        masks.append(model_mask(t, space) & e_mask)
        masks.append(e_mask)

        groups: dict[tuple, int] = {}
        allowed = c.allowed_mask
        for w in range(space.world_count):
            if allowed >> w & 1:
                sig = tuple(m >> w & 1 for m in masks)
                groups.setdefault(sig, w)
        self.signatures = sorted(groups)
        k = len(c.statements)

        # Integer rows: sum(row * n) == 0 or >= 0.
        self.eq_rows: list[list[int]] = []
        self.ge_rows: list[list[int]] = []
        for j, s in enumerate(c.statements):
            both = [sig[2 * j] for sig in self.signatures]
            cond = [sig[2 * j + 1] for sig in self.signatures]
            if s.lower == s.upper:
                self.eq_rows.append(_scaled_row(s.lower, both, cond))
                continue
            if s.lower > 0:
                self.ge_rows.append(_scaled_row(s.lower, both, cond))
            if s.upper < 1:
                self.ge_rows.append([-v for v in _scaled_row(s.upper, both, cond)])
        self.num = [sig[2 * k] for sig in self.signatures]
        self.den = [sig[2 * k + 1] for sig in self.signatures]

    def feasible(self, n) -> bool:
        if sum(d * x for d, x in zip(self.den, n)) < 1:
            return False
        for row in self.eq_rows:
            if sum(r * x for r, x in zip(row, n)) != 0:
                return False
        for row in self.ge_rows:
            if sum(r * x for r, x in zip(row, n)) < 0:
                return False
        return True

    def ratio(self, n) -> Fraction:
        num = sum(a * x for a, x in zip(self.num, n))
        den = sum(d * x for d, x in zip(self.den, n))
        return Fraction(num, den)


def _vectors(dim: int, total: int):
    """Nonnegative integer vectors of length ``dim`` with sum ``<= total``."""
    # stars and bars over dim + 1 slots, the last slot absorbing slack
    for bars in itertools.combinations(range(total + dim), dim):
        prev = -1
        v = []
        for b in bars:
            v.append(b - prev - 1)
            prev = b
        yield v


def _enumerate(grid: _Grid, resolution: int):
    # extremes kept as integer pairs (num, den), den > 0, compared crosswise
    lo = hi = None
    num_w, den_w = grid.num, grid.den
    for n in _vectors(len(grid.signatures), resolution):
        if not grid.feasible(n):
            continue
        a = sum(u * x for u, x in zip(num_w, n))
        b = sum(d * x for d, x in zip(den_w, n))
        if lo is None or a * lo[1] < lo[0] * b:
            lo = (a, b)
        if hi is None or a * hi[1] > hi[0] * b:
            hi = (a, b)
    if lo is None:
        return None, None
    return Fraction(*lo), Fraction(*hi)


def _milp_solve(grid: _Grid, resolution: int, objective) -> list[int] | None:
    dim = len(grid.signatures)
    rows, lbs, ubs = [], [], []
    for row in grid.eq_rows:
        rows.append(row), lbs.append(0), ubs.append(0)
    for row in grid.ge_rows:
        rows.append(row), lbs.append(0), ubs.append(np.inf)
    rows.append(grid.den), lbs.append(1), ubs.append(np.inf)
    rows.append([1] * dim), lbs.append(1), ubs.append(resolution)
    res = milp(
        c=np.asarray(objective, dtype=float),
        integrality=np.ones(dim),
        bounds=(0, resolution),
        constraints=LinearConstraint(np.asarray(rows, dtype=float), lbs, ubs),
        options={"mip_rel_gap": 0.0},
    )
    if res.x is None:
        return None
    n = [int(round(v)) for v in res.x]
    if not grid.feasible(n) or sum(n) > resolution:
        raise RuntimeError("integer solution failed exact verification")
    return n


def _dinkelbach(grid: _Grid, resolution: int, start: list[int], maximize: bool) -> Fraction:
    best = grid.ratio(start)
    sign = -1 if maximize else 1
    while True:
        a, b = best.numerator, best.denominator
        objective = [sign * (b * u - a * d) for u, d in zip(grid.num, grid.den)]
        n = _milp_solve(grid, resolution, objective)
        value = sum(o * x for o, x in zip(objective, n))
        if value >= 0:
            return best
        best = grid.ratio(n)


def oracle_bounds(
    c: CredalSet,
    target: FormulaLike,
    evidence: FormulaLike = TOP,
    resolution: int = 60,
    method: str = "auto",
) -> Interval | None:
    """Extremes of ``P(target | evidence)`` over the admissible grid points.

    Returns ``None`` when no grid point at this resolution satisfies the
    constraints and gives the evidence positive mass. ``method`` is
    ``"enumerate"``, ``"milp"`` or ``"auto"`` (enumerate when the grid is
    small).
    """
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    grid = _Grid(c, target, evidence)
    dim = len(grid.signatures)
    if dim == 0:
        return None
    if method == "auto":
        method = "enumerate" if math.comb(resolution + dim, dim) <= ENUMERATION_LIMIT else "milp"
    if method == "enumerate":
        lo, hi = _enumerate(grid, resolution)
        if lo is None:
            return None
        return Interval(lo, hi)
    if method != "milp":
        raise ValueError(f"unknown oracle method {method!r}")
    start = _milp_solve(grid, resolution, [0] * dim)
    if start is None:
        return None
    return Interval(
        _dinkelbach(grid, resolution, start, maximize=False),
        _dinkelbach(grid, resolution, start, maximize=True),
    )
