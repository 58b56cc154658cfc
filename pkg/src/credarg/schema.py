"""Uncertain arguments: data model, evaluation and transforms.

A Schema I argument pairs an uncertainty premise (a list of probability
statements) with categorical premises and yields an interval for its query.
Categorical premises come in two flavours:

``background``
    structural knowledge; worlds violating it get mass zero.
``evidence``
    observations; the credal set is conditioned on their conjunction.

A Schema II argument adds an acceptance level and detaches its query
categorically when the lower probability reaches that level.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .credal import (
    CredalSet,
    FormulaLike,
    Interval,
    Number,
    ProbStatement,
    as_fraction,
    assert_consistent,
    cond_bounds,
    minimal_conflict,
    restrict,
)
from .errors import (
    InconsistentCombinationError,
    PremiseNotAcceptedError,
    SupportRejectedError,
    TargetNotInEvidenceError,
)
from .logic import TOP, And, Formula, Not, WorldSpace, as_formula, conjoin, model_mask

__all__ = [
    "UncertaintyPremise",
    "SchemaIArgument",
    "SchemaIIArgument",
    "Verdict",
    "EliminationReport",
    "AuditReport",
    "CombinationWarning",
    "credal_set_for",
    "evaluate_schema_i",
    "evaluate_schema_ii",
    "combine_premises",
    "eliminate",
    "expansion_terms",
    "conjunction_audit",
    "frechet_lower",
]


class CombinationWarning(UserWarning):
    """Premises were combined on the strength of consistency alone."""


@dataclass(frozen=True)
class UncertaintyPremise:
    statements: tuple[ProbStatement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))

    def __iter__(self):
        return iter(self.statements)

    def __len__(self) -> int:
        return len(self.statements)


def _formulas(items: Iterable[FormulaLike], space: WorldSpace) -> tuple[Formula, ...]:
    return tuple(as_formula(f, space) for f in items)


@dataclass(frozen=True)
class SchemaIArgument:
    space: WorldSpace
    uncertainty: UncertaintyPremise
    query: Formula
    background: tuple[Formula, ...] = ()
    evidence: tuple[Formula, ...] = ()

    def __post_init__(self):
        if not isinstance(self.uncertainty, UncertaintyPremise):
            object.__setattr__(self, "uncertainty", UncertaintyPremise(tuple(self.uncertainty)))
        object.__setattr__(self, "query", as_formula(self.query, self.space))
        object.__setattr__(self, "background", _formulas(self.background, self.space))
        object.__setattr__(self, "evidence", _formulas(self.evidence, self.space))


@dataclass(frozen=True)
class SchemaIIArgument:
    base: SchemaIArgument
    threshold: Fraction

    def __post_init__(self):
        p = as_fraction(self.threshold)
        object.__setattr__(self, "threshold", p)
        if not Fraction(1, 2) < p <= 1:
            raise ValueError(f"acceptance level must lie in (1/2, 1], got {p}")

    @property
    def query(self) -> Formula:
        return self.base.query


@dataclass(frozen=True)
class Verdict:
    interval: Interval
    threshold: Fraction
    conclusion: Formula

    @property
    def accepted(self) -> bool:
        return self.interval.lower >= self.threshold


def credal_set_for(arg: SchemaIArgument) -> CredalSet:
    """The argument's credal set with its background made structural."""
    c = CredalSet(arg.space, arg.uncertainty.statements)
    return restrict(c, conjoin(arg.background))


def evaluate_schema_i(arg: SchemaIArgument) -> Interval:
    """Bounds on ``P(query | evidence)`` in every model of the premises."""
    return cond_bounds(credal_set_for(arg), arg.query, conjoin(arg.evidence))


def evaluate_schema_ii(arg: SchemaIIArgument) -> Verdict:
    return Verdict(evaluate_schema_i(arg.base), arg.threshold, arg.base.query)


def combine_premises(
    u1: UncertaintyPremise, u2: UncertaintyPremise, space: WorldSpace
) -> UncertaintyPremise:
    """Union of two uncertainty premises, checked for joint consistency.

    Issues a :class:`CombinationWarning`: feasibility is all that is
    checked, whether the combination is justified is up to the caller.
    """
    return _combine([u1, u2], space)


def _combine(premises: Sequence[UncertaintyPremise], space: WorldSpace) -> UncertaintyPremise:
    merged: list[ProbStatement] = []
    for u in premises:
        for s in u.statements:
            if s not in merged:
                merged.append(s)
    combined = CredalSet(space, tuple(merged))
    if not assert_consistent(combined):
        conflict = minimal_conflict(combined)
        raise InconsistentCombinationError(
            "combined uncertainty premises are inconsistent: "
            + "; ".join(str(s) for s in conflict),
            conflict,
        )
    if len(premises) > 1 and all(len(u) for u in premises):
        warnings.warn(
            "premises combined on consistency alone; whether the joint "
            "distribution is justified is not checked",
            CombinationWarning,
            stacklevel=3,
        )
    return UncertaintyPremise(tuple(merged))


def frechet_lower(levels: Sequence[Number]) -> Fraction:
    """Lowest probability of a conjunction whose conjuncts have these lower
    probabilities: ``max(0, sum(levels) - (k - 1))``."""
    levels = [as_fraction(v) for v in levels]
    for v in levels:
        if not 0 <= v <= 1:
            raise ValueError(f"level {v} outside [0, 1]")
    if not levels:
        return Fraction(1)
    return max(Fraction(0), sum(levels) - (len(levels) - 1))


# ---------------------------------------------------------------------------
# Total-probability expansion and elimination
# ---------------------------------------------------------------------------


def _cell_formula(targets: Sequence[Formula], index: int) -> Formula:
    # bit j of index set means target j is negated
    literals = [Not(t) if index >> j & 1 else t for j, t in enumerate(targets)]
    return conjoin(literals)


def expansion_terms(
    c: CredalSet,
    query: FormulaLike,
    targets: Sequence[FormulaLike],
    evidence: FormulaLike = TOP,
) -> list[tuple[Interval, Interval]]:
    """``(P(cell | e), P(query | cell & e))`` for each sign pattern of ``targets``.

    Entry ``i`` negates target ``j`` iff bit ``j`` of ``i`` is set, so the
    first entry is the all-positive cell. A cell that cannot occur gets
    weight ``[0, 0]`` and the vacuous factor ``[0, 1]``.
    """
    space = c.space
    q = as_formula(query, space)
    ts = [as_formula(t, space) for t in targets]
    e = as_formula(evidence, space)
    # raises ImpossibleEvidenceError up front when e cannot occur
    cond_bounds(c, TOP, e)
    terms = []
    for i in range(1 << len(ts)):
        cell = _cell_formula(ts, i)
        weight = cond_bounds(c, cell, e)
        if weight.upper == 0:
            terms.append((Interval(0, 0), Interval(0, 1)))
            continue
        terms.append((weight, cond_bounds(c, q, And(cell, e))))
    return terms


@dataclass(frozen=True)
class EliminationReport:
    old_interval: Interval
    new_argument: SchemaIArgument
    new_interval: Interval
    expansion: tuple[tuple[Interval, Interval], ...]
    deviation_bound: Fraction
    targets: tuple[Formula, ...] = ()

    @property
    def k(self) -> int:
        return len(self.targets)


def _same_event(f: Formula, g: Formula, space: WorldSpace) -> bool:
    return model_mask(f, space) == model_mask(g, space)


def eliminate(
    main: SchemaIArgument,
    supports: Sequence[tuple[FormulaLike, SchemaIIArgument]],
) -> EliminationReport:
    """Replace categorical evidence by the arguments that support it.

    Each ``(target, support)`` pair names an item of ``main.evidence`` and
    an accepted Schema II argument concluding it. The new argument combines
    all uncertainty premises at once, drops the targets from the evidence
    and adds the supports' own evidence and background in their place.
    """
    space = main.space
    targets: list[Formula] = []
    for target, support in supports:
        t = as_formula(target, space)
        if t not in main.evidence:
            raise TargetNotInEvidenceError(f"{t} is not among the main argument's evidence")
        if support.base.space != space:
            raise ValueError("supports must share the main argument's world space")
        if not _same_event(support.query, t, space):
            raise ValueError(f"support concludes {support.query}, not {t}")
        verdict = evaluate_schema_ii(support)
        if not verdict.accepted:
            raise SupportRejectedError(
                f"support for {t} has lower probability {verdict.interval.lower} "
                f"below its acceptance level {support.threshold}"
            )
        targets.append(t)

    old_interval = evaluate_schema_i(main)
    if not supports:
        terms = expansion_terms(credal_set_for(main), main.query, [], conjoin(main.evidence))
        return EliminationReport(old_interval, main, old_interval, tuple(terms), Fraction(0))

    uncertainty = _combine([main.uncertainty] + [s.base.uncertainty for _, s in supports], space)
    evidence = [f for f in main.evidence if f not in targets]
    background = list(main.background)
    for _, s in supports:
        evidence += [f for f in s.base.evidence if f not in evidence]
        background += [f for f in s.base.background if f not in background]
    new_arg = SchemaIArgument(space, uncertainty, main.query, tuple(background), tuple(evidence))

    c = credal_set_for(new_arg)
    e = conjoin(new_arg.evidence)
    new_interval = cond_bounds(c, new_arg.query, e)
    terms = expansion_terms(c, new_arg.query, targets, e)
    deviation = 1 - cond_bounds(c, conjoin(targets), e).lower
    return EliminationReport(
        old_interval, new_arg, new_interval, tuple(terms), deviation, tuple(targets)
    )


# ---------------------------------------------------------------------------
# Conjunction (lottery) audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    premises: tuple[Formula, ...]
    premise_intervals: tuple[Interval, ...]
    conjunction: Interval
    frechet_bound: Fraction
    threshold: Fraction

    @property
    def passed(self) -> bool:
        return self.conjunction.lower >= self.threshold


def conjunction_audit(
    u: UncertaintyPremise,
    background: Sequence[FormulaLike],
    accepted: Sequence[FormulaLike],
    threshold: Number,
    space: WorldSpace,
) -> AuditReport:
    """Check whether formulas accepted one at a time are acceptable jointly."""
    p = as_fraction(threshold)
    c = restrict(CredalSet(space, tuple(u)), conjoin(_formulas(background, space)))
    formulas = _formulas(accepted, space)
    if not formulas:
        raise ValueError("nothing to audit")
    intervals = []
    for f in formulas:
        iv = cond_bounds(c, f)
        if iv.lower < p:
            raise PremiseNotAcceptedError(
                f"{f} has lower probability {iv.lower}, below the threshold {p}"
            )
        intervals.append(iv)
    conj = cond_bounds(c, conjoin(formulas))
    floor = frechet_lower([iv.lower for iv in intervals])
    return AuditReport(formulas, tuple(intervals), conj, floor, p)
