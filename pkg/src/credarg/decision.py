"""Interval expected utility over credal sets, and act selection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .credal import CredalSet, FormulaLike, Number, as_fraction, linear_bounds, restrict
from .errors import PartitionError
from .logic import Formula, WorldSpace, as_formula, conjoin, model_mask, render
from .schema import UncertaintyPremise

GAMMA_MAXIMIN = "gamma_maximin"
INTERVAL_DOMINANCE = "interval_dominance"
RULES = (GAMMA_MAXIMIN, INTERVAL_DOMINANCE)


@dataclass(frozen=True)
class Act:
    """A named act; ``clauses`` give its utility on each piece of a partition."""

    name: str
    clauses: tuple[tuple[Formula, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "clauses", tuple((f, as_fraction(u)) for f, u in self.clauses)
        )

    def check_partition(self, space: WorldSpace) -> None:
        covered = 0
        for f, _ in self.clauses:
            mask = model_mask(as_formula(f, space), space)
            if covered & mask:
                raise PartitionError(f"act {self.name}: clause {render(f)} overlaps an earlier clause")
            covered |= mask
        if covered != space.full_mask:
            raise PartitionError(f"act {self.name}: clauses do not cover every world")


@dataclass(frozen=True)
class ExpectedUtility:
    lower: Fraction
    upper: Fraction

    def __iter__(self):
        yield self.lower
        yield self.upper


@dataclass(frozen=True)
class DecisionProblem:
    space: WorldSpace
    uncertainty: UncertaintyPremise
    acts: tuple[Act, ...]
    background: tuple[Formula, ...] = ()
    evidence: tuple[Formula, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "acts", tuple(self.acts))
        if not self.acts:
            raise ValueError("a decision problem needs at least one act")
        names = [a.name for a in self.acts]
        if len(set(names)) != len(names):
            raise ValueError("act names must be unique")

    def credal_set(self) -> CredalSet:
        c = CredalSet(self.space, tuple(self.uncertainty))
        return restrict(c, conjoin(self.background))


def expected_utility_interval(problem: DecisionProblem, act: Act) -> ExpectedUtility:
    """Lower and upper conditional expected utility of ``act`` given the evidence."""
    space = problem.space
    act.check_partition(space)
    terms = [(model_mask(as_formula(f, space), space), u) for f, u in act.clauses]
    e_mask = model_mask(conjoin(problem.evidence), space)
    lo, hi = linear_bounds(problem.credal_set(), terms, e_mask)
    return ExpectedUtility(lo, hi)


def choose(problem: DecisionProblem, rule: str = GAMMA_MAXIMIN) -> list[Act]:
    """Acts admissible under ``rule``.

    ``gamma_maximin`` keeps every act with the greatest lower expectation;
    ``interval_dominance`` keeps every act whose upper expectation is not
    beaten by some other act's lower expectation. Ties are listed by name;
    the dominance survivors are ordered by lower expectation, best first.
    """
    eus = {act.name: expected_utility_interval(problem, act) for act in problem.acts}
    acts = sorted(problem.acts, key=lambda a: a.name)
    if rule == GAMMA_MAXIMIN:
        best = max(eu.lower for eu in eus.values())
        return [a for a in acts if eus[a.name].lower == best]
    if rule == INTERVAL_DOMINANCE:
        floor = max(eu.lower for eu in eus.values())
        keep = [a for a in acts if eus[a.name].upper >= floor]
        return sorted(keep, key=lambda a: -eus[a.name].lower)
    raise ValueError(f"unknown decision rule {rule!r}; expected one of {RULES}")


def act(name: str, clauses: Sequence[tuple[FormulaLike, Number]], space: WorldSpace) -> Act:
    """Convenience constructor parsing clause formulas against ``space``."""
    return Act(name, tuple((as_formula(f, space), u) for f, u in clauses))
