"""Credal sets defined by linear probability constraints over a world space.

Every query here is a (linear-fractional) program over world masses. Worlds
that no constraint or objective can tell apart are lumped into cells before
solving, so the programs stay small even on large spaces; the lumping is
exact because every constraint and objective depends only on cell totals.

Conditional bounds use the Charnes-Cooper substitution ``y = p / P(e)``.
All statement rows are homogeneous in ``p``, so after the substitution they
stay as they are, the normalisation ``sum(p) = 1`` is replaced by
``P_y(e) = 1``, and the scale ``t = sum(y)`` is eliminated altogether.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ImpossibleEvidenceError, InconsistentPremisesError
from .logic import (
    TOP,
    And,
    Formula,
    WorldSet,
    WorldSpace,
    as_formula,
    model_mask,
    render,
)
from .simplex import INFEASIBLE, OPTIMAL, solve_lp_many

Number = Union[Fraction, int, str, float]
FormulaLike = Union[Formula, str]

__all__ = [
    "Interval",
    "ProbStatement",
    "CredalSet",
    "Distribution",
    "Consistency",
    "as_fraction",
    "credal_set",
    "assert_consistent",
    "lower_prob",
    "upper_prob",
    "prob_bounds",
    "cond_bounds",
    "restrict",
    "linear_bounds",
]


def as_fraction(x: Number) -> Fraction:
    """Exact rational from ``x``. Floats go through ``repr`` so 0.95 is 19/20."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a fraction")


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"invalid probability interval [{lo}, {hi}]")

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, other: "Interval") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def __iter__(self):
        yield self.lower
        yield self.upper

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


VACUOUS = Interval(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class ProbStatement:
    """``lower <= P(target | condition) <= upper``.

    ``kind`` records how the bound was written (``=``, ``>=``, ``<=`` or
    ``in``) so that serialisation can reproduce it.
    """

    target: Formula
    lower: Fraction
    upper: Fraction
    condition: Formula = TOP
    kind: str = "in"

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"invalid probability bounds [{lo}, {hi}]")
        if self.kind not in ("=", ">=", "<=", "in"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    @classmethod
    def equal(cls, target, value: Number, condition=TOP) -> "ProbStatement":
        v = as_fraction(value)
        return cls(target, v, v, condition, "=")

    @classmethod
    def at_least(cls, target, value: Number, condition=TOP) -> "ProbStatement":
        return cls(target, as_fraction(value), Fraction(1), condition, ">=")

    @classmethod
    def at_most(cls, target, value: Number, condition=TOP) -> "ProbStatement":
        return cls(target, Fraction(0), as_fraction(value), condition, "<=")

    @classmethod
    def between(cls, target, lower: Number, upper: Number, condition=TOP) -> "ProbStatement":
        return cls(target, as_fraction(lower), as_fraction(upper), condition, "in")

    def __str__(self) -> str:
        inner = render(self.target)
        if self.condition != TOP:
            inner += " | " + render(self.condition)
        if self.kind == "=":
            return f"P({inner}) = {self.lower}"
        if self.kind == ">=":
            return f"P({inner}) >= {self.lower}"
        if self.kind == "<=":
            return f"P({inner}) <= {self.upper}"
        return f"P({inner}) in [{self.lower}, {self.upper}]"


@dataclass(frozen=True)
class CredalSet:
    """All distributions over ``space`` meeting ``statements`` and giving zero
    mass to ``structural_zero``."""

    space: WorldSpace
    statements: tuple[ProbStatement, ...] = ()
    structural_zero: WorldSet | None = None

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))
        for s in self.statements:
            as_formula(s.target, self.space)
            as_formula(s.condition, self.space)
        if self.structural_zero is None:
            object.__setattr__(self, "structural_zero", WorldSet(self.space, 0))
        elif self.structural_zero.space != self.space:
            raise ValueError("structural_zero belongs to a different space")

    @property
    def allowed_mask(self) -> int:
        return self.space.full_mask & ~self.structural_zero.mask


def credal_set(space: WorldSpace, statements: Iterable[ProbStatement] = ()) -> CredalSet:
    return CredalSet(space, tuple(statements))


@dataclass(frozen=True)
class Distribution:
    """Mass per world, indexed like ``space`` worlds."""

    space: WorldSpace
    masses: tuple

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(self.masses))
        if len(self.masses) != self.space.world_count:
            raise ValueError("one mass per world is required")

    def prob(self, f: FormulaLike):
        mask = model_mask(as_formula(f, self.space), self.space)
        return sum((m for w, m in enumerate(self.masses) if mask >> w & 1), 0)

    def cond(self, target: FormulaLike, evidence: FormulaLike):
        t = as_formula(target, self.space)
        e = as_formula(evidence, self.space)
        den = self.prob(e)
        if den == 0:
            raise ImpossibleEvidenceError("evidence has probability zero")
        return self.prob(And(t, e)) / den

    def entropy(self) -> float:
        return -sum(float(m) * math.log(float(m)) for m in self.masses if m > 0)

    def satisfies(self, statement: ProbStatement, tol=0) -> bool:
        c = self.prob(statement.condition)
        tc = self.prob(And(statement.target, statement.condition))
        return statement.lower * c - tol <= tc <= statement.upper * c + tol


@dataclass(frozen=True)
class Consistency:
    satisfiable: bool
    witness: Distribution | None = None

    def __bool__(self) -> bool:
        return self.satisfiable


# ---------------------------------------------------------------------------
# LP assembly
# ---------------------------------------------------------------------------


def _statement_masks(c: CredalSet) -> list[tuple[int, int, ProbStatement]]:
    out = []
    for s in c.statements:
        cond = model_mask(s.condition, c.space)
        both = model_mask(s.target, c.space) & cond
        out.append((both, cond, s))
    return out


def _cells(allowed: int, masks: Iterable[int]) -> list[int]:
    cells = [allowed] if allowed else []
    for m in masks:
        refined = []
        for cell in cells:
            inside = cell & m
            if inside:
                refined.append(inside)
            outside = cell & ~m
            if outside:
                refined.append(outside)
        cells = refined
    return cells


@dataclass
class _Program:
    cells: list[int]
    eq_rows: list[list[Fraction]] = field(default_factory=list)
    ge_rows: list[list[Fraction]] = field(default_factory=list)
    owners_eq: list[int] = field(default_factory=list)
    owners_ge: list[int] = field(default_factory=list)

    def indicator(self, mask: int) -> list[Fraction]:
        return [Fraction(1) if cell & mask else Fraction(0) for cell in self.cells]


def _program(c: CredalSet, extra_masks: Sequence[int]) -> _Program:
    stmts = _statement_masks(c)
    masks = [m for both, cond, _ in stmts for m in (both, cond)]
    prog = _Program(_cells(c.allowed_mask, list(masks) + list(extra_masks)))
    for k, (both, cond, s) in enumerate(stmts):
        in_both = prog.indicator(both)
        in_cond = prog.indicator(cond)
        if s.lower == s.upper:
            prog.eq_rows.append([b - s.lower * d for b, d in zip(in_both, in_cond)])
            prog.owners_eq.append(k)
            continue
        if s.lower > 0:
            prog.ge_rows.append([b - s.lower * d for b, d in zip(in_both, in_cond)])
            prog.owners_ge.append(k)
        if s.upper < 1:
            prog.ge_rows.append([s.upper * d - b for b, d in zip(in_both, in_cond)])
            prog.owners_ge.append(k)
    return prog


def _solve_many(prog: _Program, objectives: list[list[Fraction]], normaliser: list[Fraction]):
    eq = prog.eq_rows + [normaliser]
    b_eq = [Fraction(0)] * len(prog.eq_rows) + [Fraction(1)]
    zeros = [Fraction(0)] * len(prog.ge_rows)
    return solve_lp_many(objectives, eq, b_eq, prog.ge_rows, zeros)


def _solve(prog: _Program, objective: list[Fraction], normaliser: list[Fraction]):
    return _solve_many(prog, [objective], normaliser)[0]


def _spread(c: CredalSet, cells: list[int], cell_mass: Sequence[Fraction]) -> Distribution:
    masses = [Fraction(0)] * c.space.world_count
    for cell, m in zip(cells, cell_mass):
        if m:
            share = m / cell.bit_count()
            w = cell
            while w:
                low = w & -w
                masses[low.bit_length() - 1] = share
                w ^= low
    return Distribution(c.space, tuple(masses))


# ---------------------------------------------------------------------------
# Public queries
# ---------------------------------------------------------------------------


def assert_consistent(c: CredalSet) -> Consistency:
    """Feasibility of ``c``, with an exact witness distribution when feasible."""
    prog = _program(c, ())
    n = len(prog.cells)
    if n == 0:
        return Consistency(False)
    res = _solve(prog, [Fraction(0)] * n, [Fraction(1)] * n)
    if res.status != OPTIMAL:
        return Consistency(False)
    return Consistency(True, _spread(c, prog.cells, res.x))


@lru_cache(maxsize=256)
def _is_consistent(c: CredalSet) -> bool:
    return assert_consistent(c).satisfiable


def _require_consistent(c: CredalSet) -> None:
    if not _is_consistent(c):
        raise InconsistentPremisesError("the premises admit no distribution")


def linear_bounds(
    c: CredalSet,
    terms: Sequence[tuple[int, Fraction]],
    evidence_mask: int,
) -> tuple[Fraction, Fraction]:
    """Bounds of ``E[u | e]`` where ``u`` takes value ``coef`` on each ``mask``.

    ``terms`` are ``(mask, coef)`` pairs; coefficients on overlapping masks
    add. Raises when ``c`` is inconsistent or ``e`` has upper probability 0.
    """
    _require_consistent(c)
    prog = _program(c, [m for m, _ in terms] + [evidence_mask])
    evidence = prog.indicator(evidence_mask)
    objective = [
        sum((coef for mask, coef in terms if cell & mask), Fraction(0)) * e
        for cell, e in zip(prog.cells, evidence)
    ]
    low, high = _solve_many(prog, [objective, [-v for v in objective]], evidence)
    if low.status == INFEASIBLE:
        raise ImpossibleEvidenceError("the evidence has upper probability zero")
    return low.value, -high.value


def cond_bounds(c: CredalSet, target: FormulaLike, evidence: FormulaLike = TOP) -> Interval:
    """Lower and upper ``P(target | evidence)`` over ``c`` (regular extension).

    Distributions giving the evidence zero mass are excluded. Over a
    polytope the bounds are always attained: a conditional probability at
    any admissible point is a weighted average of its values at vertices
    where the evidence has positive mass.
    """
    t = as_formula(target, c.space)
    e = as_formula(evidence, c.space)
    e_mask = model_mask(e, c.space)
    both = model_mask(t, c.space) & e_mask
    lo, hi = linear_bounds(c, [(both, Fraction(1))], e_mask)
    return Interval(lo, hi)


def prob_bounds(c: CredalSet, event: FormulaLike) -> Interval:
    return cond_bounds(c, event, TOP)


def lower_prob(c: CredalSet, event: FormulaLike) -> Fraction:
    return prob_bounds(c, event).lower


def upper_prob(c: CredalSet, event: FormulaLike) -> Fraction:
    return prob_bounds(c, event).upper


def restrict(c: CredalSet, background: FormulaLike) -> CredalSet:
    """Zero every world violating ``background``."""
    b = as_formula(background, c.space)
    excluded = c.space.full_mask ^ model_mask(b, c.space)
    return CredalSet(
        c.space,
        c.statements,
        WorldSet(c.space, c.structural_zero.mask | excluded),
    )


def with_statements(c: CredalSet, statements: Iterable[ProbStatement]) -> CredalSet:
    return CredalSet(c.space, tuple(c.statements) + tuple(statements), c.structural_zero)


def minimal_conflict(c: CredalSet) -> tuple[ProbStatement, ...]:
    """An irreducible infeasible subset of ``c.statements`` (deletion filter).

    Returns ``()`` when ``c`` is consistent, or when the structural zeros
    alone already exclude every world.
    """
    if assert_consistent(c):
        return ()
    if not assert_consistent(CredalSet(c.space, (), c.structural_zero)):
        return ()
    kept = list(c.statements)
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1:]
        if not assert_consistent(CredalSet(c.space, tuple(trial), c.structural_zero)):
            kept = trial
        else:
            i += 1
    return tuple(kept)
